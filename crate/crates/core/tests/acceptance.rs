//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (run with `cargo test --test acceptance -- --nocapture` to see
//! them). Every tolerance here is exact equality — the substrate is an
//! exact field, so there are no epsilons anywhere.

use num_traits::Signed;
use orthoweave::diagram::{
    jones, kauffman_bracket, linking_number, pd_code, project_necklace, LaurentPoly, PDCode,
    PDCrossing,
};
use orthoweave::exactnum::{ratio, QuadExt};
use orthoweave::inversive::{inv_product, InvVec, MobiusMap};
use orthoweave::json::{necklace_from_json, necklace_to_json};
use orthoweave::numth;
use orthoweave::orthocubic::{
    braid_grid, build, closure, conway, counts_necklace, validate_packing, Built, ClosureKind,
    Necklace,
};
use orthoweave::packing::{ctx, orthoplicial_base};
use orthoweave::tangle::{cf_eval, cf_expand, parse, Slope};
use std::collections::BTreeMap;
use std::time::Instant;

fn necklace(src: &str) -> Necklace {
    match build(&parse(src).unwrap()).unwrap() {
        Built::Necklace(n) => n,
        _ => panic!("expected a closed link from {src}"),
    }
}

fn q(n: i64) -> QuadExt {
    QuadExt::from_int(n)
}

#[test]
fn criterion_01_base_sphere_table() {
    let t0 = Instant::now();
    let p = orthoplicial_base();
    // printed inversive rows: (1/√2)(ε₁, ε₂, ε₃, ε₄, √2)
    let h = QuadExt::from_parts(0, 1, 1, 2);
    let rows: &[(i8, [i64; 4])] = &[
        (1, [1, -1, 1, -1]),
        (2, [-1, 1, 1, -1]),
        (3, [-1, -1, 1, 1]),
        (4, [1, 1, 1, 1]),
        (-1, [-1, 1, -1, 1]),
        (-2, [1, -1, -1, 1]),
        (-3, [1, 1, -1, -1]),
        (-4, [-1, -1, -1, -1]),
    ];
    for &(lbl, signs) in rows {
        let got = &p.spheres[&vec![lbl]];
        let mut want: Vec<QuadExt> = signs.iter().map(|&e| &h * &q(e)).collect();
        want.push(&h * &QuadExt::sqrt2());
        assert_eq!(got.coords(), &want[..], "row {lbl}");
    }
    let mut tangent = 0;
    let mut antipodal = 0;
    let keys: Vec<_> = p.spheres.keys().cloned().collect();
    for i in 0..keys.len() {
        for j in (i + 1)..keys.len() {
            let pr = inv_product(&p.spheres[&keys[i]], &p.spheres[&keys[j]]).unwrap();
            if keys[i][0] == -keys[j][0] {
                assert_eq!(pr, q(-3));
                antipodal += 1;
            } else {
                assert_eq!(pr, q(-1));
                tangent += 1;
            }
        }
    }
    assert_eq!((tangent, antipodal), (24, 4));
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1: PASS — base sphere table exact, 24 tangent and 4 antipodal pairs ({elapsed:?})");
}

#[test]
fn criterion_02_inversion_matrix_golden() {
    // inversion through the dual circle centered (√2, 0) with radius 1
    let s2 = QuadExt::sqrt2();
    let c1 = InvVec::sphere_from_bend_center(&q(1), &[s2.clone(), q(0)]).unwrap();
    let m = MobiusMap::inversion(&c1).unwrap();
    let two_s2 = &q(2) * &s2;
    let expected = orthoweave::linalg::Mat::from_rows(vec![
        vec![q(-3), q(0), q(0), two_s2.clone()],
        vec![q(0), q(1), q(0), q(0)],
        vec![q(0), q(0), q(1), q(0)],
        vec![-&two_s2, q(0), q(0), q(3)],
    ]);
    assert_eq!(m.m, expected);
    println!("criterion 2: PASS — printed 4×4 inversion matrix reproduced entry for entry");
}

#[test]
fn criterion_03_recursion_vs_closed_form() {
    let t0 = Instant::now();
    let mut memo: BTreeMap<i64, MobiusMap> = BTreeMap::new();
    let mut checked = 0usize;
    for p in 1i64..=99 {
        for qd in 1i64..=99 {
            if p + qd > 100 || num_integer::gcd(p, qd) != 1 {
                continue;
            }
            let s = Slope::from_ints(p, qd);
            let coeffs = cf_expand(&s).unwrap();
            let mut m = MobiusMap::identity(2);
            for &a in &coeffs {
                let twist = memo
                    .entry(a)
                    .or_insert_with(|| numth::twist_matrix(a))
                    .clone();
                m = m.compose(&twist);
            }
            let v = m.apply(&numth::base_point_vector()).unwrap();
            let cf = numth::orthocubic_point(&s).unwrap();
            assert!(v.proj_eq(&cf.invvec), "{p}/{qd}");
            // the scalar is positive: last coordinates share their sign
            assert_eq!(
                v.coords()[3].signum(),
                cf.invvec.coords()[3].signum(),
                "{p}/{qd}"
            );
            checked += 1;
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("criterion 3: PASS — recursion equals closed form up to a positive scalar on {checked} coprime pairs ({elapsed:?})");
}

#[test]
fn criterion_04_diophantine_sweep() {
    // the generator asserts the quartic identity and primitivity for every
    // tuple it emits
    let sols = numth::diophantine(200);
    assert!(sols.len() > 12000, "{} tuples", sols.len());
    assert!(sols.iter().any(|s| s.x == 3.into() && s.y == 2.into() && s.z == 1.into() && s.t == 7.into()));
    for s in &sols {
        let lhs = s.x.pow(4) + s.y.pow(4) + s.z.pow(4);
        assert_eq!(lhs, 2 * (&s.t * &s.t));
        let g = num_integer::gcd(
            num_integer::gcd(s.x.clone(), s.y.clone()),
            num_integer::gcd(s.z.clone(), s.t.clone()),
        );
        assert!(g.abs() == 1.into());
    }
    println!(
        "criterion 4: PASS — {} parametrized tuples satisfy x⁴+y⁴+z⁴=2t² exactly and are primitive",
        sols.len()
    );
}

#[test]
fn criterion_05_sphere_counts() {
    let hopf = closure(&conway(&[2], true).unwrap(), ClosureKind::Numerator).unwrap();
    assert_eq!(hopf.sphere_count(), 8);
    let trefoil = closure(&conway(&[3], true).unwrap(), ClosureKind::Numerator).unwrap();
    assert_eq!(trefoil.sphere_count(), 12);
    let fig8 = closure(&conway(&[2, 2], true).unwrap(), ClosureKind::Numerator).unwrap();
    assert_eq!(fig8.sphere_count(), 16);
    let pretzel = necklace("N(t(1/3) + t(1/2) + t(1/3))");
    assert_eq!(pretzel.sphere_count(), 32);

    // exhaustive sweep: every admissible list with coefficient sum ≤ 12
    // costs exactly four spheres per crossing
    let mut lists: Vec<Vec<i64>> = Vec::new();
    fn compositions(total: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if total == 0 {
            if !acc.is_empty() {
                out.push(acc.clone());
            }
            return;
        }
        for first in 1..=total {
            acc.push(first);
            compositions(total - first, acc, out);
            acc.pop();
        }
    }
    for m in 1..=12i64 {
        let mut tails = Vec::new();
        compositions(m, &mut Vec::new(), &mut tails);
        for tail in tails {
            lists.push(tail.clone());
            if tail.len() >= 1 {
                let mut with_zero = vec![0];
                with_zero.extend(&tail);
                lists.push(with_zero);
            }
        }
    }
    let mut n_checked = 0usize;
    for coeffs in &lists {
        let total: i64 = coeffs.iter().sum();
        let t = conway(coeffs, true).unwrap();
        assert_eq!(
            t.sphere_count() as i64,
            4 * total,
            "list {coeffs:?}"
        );
        n_checked += 1;
    }
    println!(
        "criterion 5: PASS — 8/12/16/32 golden counts and 4·Σa spheres across {n_checked} coefficient lists"
    );
}

#[test]
fn criterion_06_braid_counts() {
    let plain = braid_grid("aaaa", false).unwrap();
    assert_eq!(plain.sphere_count(), 18);
    validate_packing(&plain).unwrap();
    let walls = braid_grid("aaaa", true).unwrap();
    assert_eq!(walls.sphere_count(), 16);
    validate_packing(&walls).unwrap();
    println!("criterion 6: PASS — four-crossing braid closes with 18 spheres, 16 with the half-space closure");
}

#[test]
fn criterion_07_packing_suite_and_mutation() {
    let produced: Vec<Necklace> = vec![
        necklace("N(t(3))"),
        necklace("N(t(2,2))"),
        necklace("D(t(2,2))"),
        necklace("N(t(2))"),
        necklace("N(t(1/3) + t(1/2) + t(1/3))"),
        necklace("N(t(1/3) + t(-1/2) + t(1/3))"),
        necklace("N(t(2,-2,-3))"),
        necklace("braid(\"aaa\")"),
        braid_grid("aaaa", true).unwrap(),
        necklace("N(t(0))"),
    ];
    for n in &produced {
        validate_packing(n).unwrap();
    }
    // mutate one coordinate by a rational on the 10⁻⁹ scale
    let n = necklace("N(t(3))");
    let mut doc = necklace_to_json(&n, 3, 12);
    let a = doc["spheres"][0]["coords"][0]["a"].as_str().unwrap();
    let bumped = orthoweave::exactnum::parse_rat(a).unwrap() + ratio(1, 1_000_000_000);
    doc["spheres"][0]["coords"][0]["a"] = serde_json::Value::String(bumped.to_string());
    let rejected = match necklace_from_json(&doc) {
        Err(_) => true,
        Ok(back) => validate_packing(&back).is_err(),
    };
    assert!(rejected, "perturbed necklace must fail verification");
    println!(
        "criterion 7: PASS — {} pipeline outputs pass the exact packing suite; a 10⁻⁹ perturbation is rejected",
        produced.len()
    );
}

fn ref_trefoil() -> PDCode {
    PDCode {
        crossings: vec![
            PDCrossing { arcs: [1, 4, 2, 5], over_in_last: false },
            PDCrossing { arcs: [3, 6, 4, 1], over_in_last: false },
            PDCrossing { arcs: [5, 2, 6, 3], over_in_last: false },
        ],
        components: 1,
        free_loops: 0,
        arc_component: (1..=6).map(|a| (a, 0)).collect(),
    }
}

fn ref_figure_eight() -> PDCode {
    PDCode {
        crossings: vec![
            PDCrossing { arcs: [4, 2, 5, 1], over_in_last: true },
            PDCrossing { arcs: [8, 6, 1, 5], over_in_last: true },
            PDCrossing { arcs: [6, 3, 7, 4], over_in_last: false },
            PDCrossing { arcs: [2, 7, 3, 8], over_in_last: false },
        ],
        components: 1,
        free_loops: 0,
        arc_component: (1..=8).map(|a| (a, 0)).collect(),
    }
}

fn jones_of(n: &Necklace) -> LaurentPoly {
    jones(&pd_code(&project_necklace(n).unwrap()).unwrap()).unwrap()
}

#[test]
fn criterion_08_isotopy_oracle() {
    let mut timed = |label: &str, f: &mut dyn FnMut()| {
        let t = Instant::now();
        f();
        let dt = t.elapsed();
        assert!(dt.as_secs_f64() < 1.0, "{label} took {dt:?}");
    };
    timed("trefoil vs reference", &mut || {
        let jt = jones_of(&necklace("N(t(3))"));
        let rt = jones(&ref_trefoil()).unwrap();
        assert!(jt == rt || jt == rt.invert_variable());
    });
    timed("figure-eight vs reference", &mut || {
        let jf = jones_of(&necklace("N(t(2,2))"));
        assert_eq!(jf, jones(&ref_figure_eight()).unwrap());
    });
    timed("Hopf linking", &mut || {
        let hopf = necklace("N(t(2))");
        let lk = linking_number(&pd_code(&project_necklace(&hopf).unwrap()).unwrap()).unwrap();
        assert_eq!(lk.abs(), 1);
    });
    timed("equal slopes", &mut || {
        let a = closure(&conway(&[2, -2, -3], false).unwrap(), ClosureKind::Numerator).unwrap();
        let b = closure(&conway(&[1, 1, 1, 3], true).unwrap(), ClosureKind::Numerator).unwrap();
        assert_eq!(jones_of(&a), jones_of(&b));
    });
    println!("criterion 8: PASS — trefoil/figure-eight match references, Hopf linking ±1, equal-slope builds share their polynomial, each under a second");
}

#[test]
fn criterion_09_point_from_tangle_coherence() {
    // every positive coefficient list with sum ≤ 8, built with the full
    // pipeline, has its first-edge tangency point on the closed form
    let mut lists: Vec<Vec<i64>> = Vec::new();
    fn compositions(total: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if total == 0 {
            if !acc.is_empty() {
                out.push(acc.clone());
            }
            return;
        }
        for first in 1..=total {
            acc.push(first);
            compositions(total - first, acc, out);
            acc.pop();
        }
    }
    for m in 1..=8i64 {
        let mut tmp = Vec::new();
        compositions(m, &mut Vec::new(), &mut tmp);
        for tail in tmp {
            lists.push(tail.clone());
            let mut with_zero = vec![0];
            with_zero.extend(&tail);
            lists.push(with_zero);
        }
    }
    let mut n_checked = 0usize;
    for coeffs in &lists {
        let slope = cf_eval(coeffs).unwrap();
        let t = conway(coeffs, false).unwrap();
        let pt = numth::ne_edge_tangency_point(&t).unwrap();
        let cf = numth::orthocubic_point(&slope).unwrap();
        assert_eq!(pt, cf.cartesian, "{coeffs:?}");
        n_checked += 1;
    }
    println!("criterion 9: PASS — first-edge tangency point equals the closed form on {n_checked} positive lists");
}

#[test]
fn criterion_10_bespoke_representation_not_reproduced() {
    let n = necklace("N(t(1/3) + t(-1/2) + t(1/3))");
    validate_packing(&n).unwrap();
    let (spheres, crossings) = counts_necklace(&n).unwrap();
    assert_eq!(crossings, 8);
    assert_ne!(
        spheres, 28,
        "the bespoke 28-sphere representation is out of scope and must not appear"
    );
    // the non-alternating eight-crossing knot: bracket span strictly below
    // the alternating bound
    let b = kauffman_bracket(&pd_code(&project_necklace(&n).unwrap()).unwrap()).unwrap();
    assert!(b.span() < 32);
    println!(
        "criterion 10: generic mixed-sign pretzel builds with {spheres} spheres (bespoke 28 not reproduced)"
    );
    // The stated expectation is 32 = 4·cr. A contained mirror block costs
    // four connector spheres beyond four-per-crossing (the outward-wrapped
    // form that avoids them collides with any neighbouring summand), so the
    // faithful generic build yields 36. Asserted as stated; see the
    // decisions ledger for the blocking analysis.
    assert_eq!(spheres, 32, "stated expectation (see decisions ledger)");
}
