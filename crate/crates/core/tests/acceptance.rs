//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary so the lines are always printed. The process
//! fails if any criterion outside `EXPECTED_FAILURES` fails, or if an
//! expected failure starts passing.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use boselab_core::harness::{
    check_bracket_planes, check_cone, check_conic_planes, check_fq_conic_extension,
    check_fq_conic_variety, check_frame_identities, check_hyperbolic_scroll,
    check_regulus_negatives, check_sigma_bijection, check_subline_extension, check_subline_reguli,
    check_subplane_segre, check_transversal_uniqueness, draw_sections, plane_order_control,
    quadric_order_control, scroll_order_dimension, sigma_summary,
};
use boselab_core::{BoseFrame, CheckReport, FieldTower, Level, Rng, DEFAULT_CAP};

const SEED: u64 = 20240601;

/// σ is birational, not bijective, onto the scroll: the parameters with
/// y₀ = 0 collapse onto a single line and most of the scroll is missed.
const EXPECTED_FAILURES: &[u32] = &[12];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn tower(q: u32) -> FieldTower {
    FieldTower::for_order(q).expect("supported order")
}

fn frame(q: u32) -> BoseFrame {
    BoseFrame::new(tower(q))
}

fn rng(criterion: u32, label: &str) -> Rng {
    Rng::new(SEED).split_indexed(label, criterion as u64)
}

fn counter(r: &CheckReport, key: &str) -> u64 {
    r.counters.get(key).copied().unwrap_or(0)
}

fn spread_partition() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (q, planes, points) in [(2u32, 73u64, 511u64), (3, 757, 9841)] {
        let start = Instant::now();
        let r = frame(q).verify_spread(DEFAULT_CAP).expect("spread");
        let secs = start.elapsed().as_secs_f64();
        let ok = r.pass
            && r.plane_count == planes
            && r.points_covered == points
            && r.multiplicity_histogram.len() == 1
            && r.multiplicity_histogram.get(&1) == Some(&points)
            && secs < 5.0;
        pass &= ok;
        parts.push(format!(
            "q={q}: {} planes, {} points, {secs:.2}s",
            r.plane_count, r.points_covered
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn transversal_identities() -> Outcome {
    let mut pass = true;
    for q in [2, 3, 4, 5] {
        let fr = frame(q);
        let t = fr.tower();
        let f = t.field(Level::Cubic);
        // τ^q and τ^{q²} by repeated multiplication.
        let tau = t.tau().raw();
        let tq = f.pow(tau, q as u64);
        let tqq = f.pow(tq, q as u64);
        let [a0, a1, _] = fr.constants();
        pass &= a0 == f.neg(f.mul(tq, tqq)) && a1 == f.add(tq, tqq);
        pass &= check_frame_identities(&fr).expect("frame").pass;
    }
    Outcome {
        pass,
        detail: "q ∈ {2,3,4,5}: constants, disjointness, spanning, no rational points".into(),
    }
}

fn transversal_uniqueness() -> Outcome {
    let start = Instant::now();
    let r = check_transversal_uniqueness(&tower(2), &mut rng(3, "points"), 20).expect("uniqueness");
    let secs = start.elapsed().as_secs_f64();
    let through = counter(&r, "planes_through_point");
    Outcome {
        pass: r.pass
            && through == 10795
            && counter(&r, "points") == 20
            && counter(&r, "transversals_found") == 20
            && secs < 60.0,
        detail: format!(
            "20 points, {through} planes each, {} transversals, {secs:.1}s",
            counter(&r, "transversals_found")
        ),
    }
}

fn subline_reguli() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    for q in [2, 3, 4] {
        let r = check_subline_reguli(&frame(q), &mut rng(4, "sublines"), 25).expect("reguli");
        pass &= r.pass && counter(&r, "sublines") == 25;
    }
    let neg = check_regulus_negatives(&tower(3), &mut rng(4, "negatives"), 20).expect("negatives");
    pass &= neg.pass && counter(&neg, "rejected") == 20;
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: pass && secs < 30.0,
        detail: format!(
            "75 sublines, {}/20 controls rejected, {secs:.1}s",
            counter(&neg, "rejected")
        ),
    }
}

fn subplane_segre() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    for q in [2u64, 3] {
        let r =
            check_subplane_segre(&frame(q as u32), &mut rng(5, "subplanes"), 10).expect("segre");
        pass &= r.pass && counter(&r, "planes") == 10 * (q * q + q + 1);
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: pass && secs < 60.0,
        detail: format!("10 subplanes at q=2 and q=3, {secs:.1}s"),
    }
}

fn conic_planes() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut sizes = Vec::new();
    for q in [2u64, 3] {
        let r = check_conic_planes(&frame(q as u32), &mut rng(6, "conics"), 10, DEFAULT_CAP)
            .expect("conics");
        let each = (q.pow(3) + 1) * (q * q + q + 1);
        pass &= r.pass && counter(&r, "conics") == 10 && counter(&r, "points") == 10 * each;
        sizes.push(counter(&r, "points") / 10);
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: pass && secs < 60.0,
        detail: format!("|V| = {} and {}, {secs:.1}s", sizes[0], sizes[1]),
    }
}

fn cone() -> Outcome {
    let start = Instant::now();
    let fr = frame(2);
    let r = check_cone(&fr, &mut rng(7, "cone"), 500, false).expect("cone");
    let wrong = check_cone(&fr, &mut rng(7, "wrong base"), 500, true).expect("cone");
    let secs = start.elapsed().as_secs_f64();
    let pass = r.pass
        && counter(&r, "line_samples") >= 500
        && counter(&r, "line_failures") == 0
        && counter(&r, "projections_in_base") == 500
        && counter(&r, "projection_failures") == 0
        && wrong.pass
        && counter(&wrong, "projection_failures") > 0
        && secs < 60.0;
    Outcome {
        pass,
        detail: format!(
            "{} line samples, {} zeros projected, wrong base rejected by {} projections, {secs:.1}s",
            counter(&r, "line_samples"),
            counter(&r, "projections_in_base"),
            counter(&wrong, "projection_failures")
        ),
    }
}

fn extensions() -> Outcome {
    let start = Instant::now();
    let fr = frame(2);
    let b = check_bracket_planes(&fr, &mut rng(8, "bracket"), 50).expect("bracket");
    let s = check_subline_extension(&fr, &mut rng(8, "subline")).expect("subline");
    let secs = start.elapsed().as_secs_f64();
    let pass = b.pass
        && counter(&b, "planes") == 50
        && counter(&b, "points") == 50 * 73
        && s.pass
        && counter(&s, "extended_planes") == 9
        && secs < 120.0;
    Outcome {
        pass,
        detail: format!(
            "{} bracket planes / {} points, {} extended regulus planes, {secs:.1}s",
            counter(&b, "planes"),
            counter(&b, "points"),
            counter(&s, "extended_planes")
        ),
    }
}

fn fq_conics() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut sizes = Vec::new();
    for q in [2u64, 3] {
        let r = check_fq_conic_variety(&frame(q as u32), &mut rng(9, "variety"), 3, DEFAULT_CAP)
            .expect("variety");
        pass &= r.pass && counter(&r, "points") == 3 * (q + 1) * (q * q + q + 1);
        sizes.push(counter(&r, "points") / 3);
    }
    let e = check_fq_conic_extension(&frame(2), &mut rng(9, "extension"), 9, 10_000)
        .expect("extension");
    pass &= e.pass && counter(&e, "zeros") == 10_000 && counter(&e, "located") == 10_000;
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: pass && secs < 120.0,
        detail: format!(
            "|V| = {} and {}, {} of 10000 zeros on bracket planes, {secs:.1}s",
            sizes[0],
            sizes[1],
            counter(&e, "located")
        ),
    }
}

/// Independent recount for the order sampling at q = 7: rebuild the scroll
/// from its definition and test each drawn 5-space by rank over GF(7).
fn brute_force_order(seed_rng: &Rng, samples: usize) -> (Vec<Option<u64>>, u64) {
    const P: u64 = 7;
    fn rank(mut rows: Vec<Vec<u64>>) -> usize {
        let mut r = 0;
        for c in 0..9 {
            let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, i);
            let inv = (1..P).find(|&x| x * rows[r][c] % P == 1).expect("unit");
            let pivot: Vec<u64> = rows[r].iter().map(|&x| x * inv % P).collect();
            for (k, row) in rows.iter_mut().enumerate() {
                if k != r && row[c] != 0 {
                    let m = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot) {
                        *x = (*x + P * P - m * y) % P;
                    }
                }
            }
            rows[r] = pivot;
            r += 1;
        }
        r
    }
    let conic: Vec<[u64; 3]> = std::iter::once([0, 0, 1])
        .chain((0..P).map(|s| [1, s, s * s % P]))
        .collect();
    let mut weights = Vec::new();
    for a in 0..P {
        for b in 0..P {
            weights.push([1, a, b]);
        }
        weights.push([0, 1, a]);
    }
    weights.push([0, 0, 1]);
    let mut points = Vec::new();
    for c in &conic {
        for w in &weights {
            points.push(
                (0..9)
                    .map(|i| w[i / 3] * c[i % 3] % P)
                    .collect::<Vec<u64>>(),
            );
        }
    }
    let generators: Vec<Vec<Vec<u64>>> = conic
        .iter()
        .map(|c| {
            (0..3)
                .map(|blk| {
                    (0..9)
                        .map(|i| if i / 3 == blk { c[i % 3] } else { 0 })
                        .collect()
                })
                .collect()
        })
        .collect();
    let t = tower(7);
    let draws = draw_sections(&t, Level::Base, 8, 5, &mut seed_rng.clone(), samples);
    let hits = draws
        .iter()
        .map(|s| {
            let basis: Vec<Vec<u64>> = s
                .basis()
                .iter()
                .map(|r| r.iter().map(|&x| x as u64).collect())
                .collect();
            let degenerate = generators
                .iter()
                .any(|g| rank(basis.iter().chain(g).cloned().collect()) <= 7);
            if degenerate {
                return None;
            }
            let inside = points
                .iter()
                .filter(|p| rank(basis.iter().chain(std::iter::once(*p)).cloned().collect()) == 6)
                .count();
            Some(inside as u64)
        })
        .collect();
    (hits, points.len() as u64)
}

fn scroll_order() -> Outcome {
    let start = Instant::now();
    let t7 = tower(7);
    // Same stream the scroll suite uses for its order check.
    let stream = Rng::new(1).split("scroll_order");
    let rep = scroll_order_dimension(&t7, &mut stream.clone(), 2000, DEFAULT_CAP).expect("order");
    let sampled = start.elapsed().as_secs_f64();
    let (brute, size) = brute_force_order(&stream, 2000);
    let plane = plane_order_control(&t7, &mut rng(10, "plane"), 500, DEFAULT_CAP).expect("plane");
    let quadric = quadric_order_control(&tower(5), &mut rng(10, "quadric"), 500, DEFAULT_CAP)
        .expect("quadric");
    let secs = start.elapsed().as_secs_f64();
    let pass = rep.max_hits == 6
        && rep.max_attained >= 1
        && rep.histogram["overflow"] == 0
        && rep.hits == brute
        && size == 456
        && plane.modal_hits == 1
        && plane.max_hits == 1
        && plane.histogram["0"] == 0
        && quadric.max_hits == 2
        && quadric.max_attained >= 1
        && sampled < 120.0;
    Outcome {
        pass,
        detail: format!(
            "max {} attained {}×, {} degenerate, brute force {}; plane modal {}; quadric max {}; {sampled:.1}s sampling, {secs:.1}s total",
            rep.max_hits,
            rep.max_attained,
            rep.degenerate,
            if rep.hits == brute { "agrees" } else { "disagrees" },
            plane.modal_hits,
            quadric.max_hits
        ),
    }
}

fn hyperbolic_scroll() -> Outcome {
    let mut pass = true;
    let mut sizes = Vec::new();
    for q in [2, 3, 5] {
        let r = check_hyperbolic_scroll(&tower(q), DEFAULT_CAP).expect("scroll");
        pass &= r.pass;
        sizes.push(counter(&r, "points").to_string());
    }
    Outcome {
        pass,
        detail: format!("(q+1)² points: {}", sizes.join(", ")),
    }
}

fn sigma() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for q in [2, 3] {
        let t = tower(q);
        pass &= check_sigma_bijection(&t, DEFAULT_CAP).expect("sigma").pass;
        let s = sigma_summary(&t, DEFAULT_CAP).expect("sigma");
        parts.push(format!(
            "q={q}: {} admissible, image {}, scroll {}",
            s.admissible, s.image, s.scroll
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "spread partition", spread_partition),
        (2, "transversal identities", transversal_identities),
        (3, "unique transversal plane", transversal_uniqueness),
        (4, "subline 2-reguli", subline_reguli),
        (5, "subplane Segre systems", subplane_segre),
        (6, "conic plane unions", conic_planes),
        (7, "cone over a conic", cone),
        (8, "bracket plane extensions", extensions),
        (9, "GF(q)-conic varieties", fq_conics),
        (10, "scroll order and dimension", scroll_order),
        (11, "hyperbolic quadric scroll", hyperbolic_scroll),
        (12, "σ bijection onto the scroll", sigma),
    ];
    let mut unexpected = Vec::new();
    let mut total = Duration::ZERO;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let out = run();
        total += start.elapsed();
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        let tag = match (out.pass, expected_fail) {
            (true, _) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:>2} {tag}: {name}: {}", out.detail);
        if out.pass == expected_fail {
            unexpected.push(id);
        }
    }
    println!("acceptance finished in {:.1}s", total.as_secs_f64());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
