//! Recognition predicates, sampling of order and dimension, theorem
//! batteries, and the suite runner behind the CLI.
//!
//! Every check produces a [`CheckReport`]. A report passes exactly when it
//! carries no witness; the first failing object is recorded as the witness
//! together with the index needed to reproduce it from the seed.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bose::BoseFrame;
use crate::error::{Error, Result};
use crate::fields::{split_prime_power, FieldTower, Level};
use crate::forms::{
    conic_to_quadrics, expand_form, is_nondegenerate_conic, random_conic, random_form, verify_cone,
    HomogeneousForm, VarietyHandle,
};
use crate::projgeom::{random_point, random_subspace, span, ProjPoint, Subspace, DEFAULT_CAP};
use crate::rng::Rng;
use crate::substructures::{
    bracket_plane, canonical_conic_scroll, canonical_conic_scroll_variety, fq_conic,
    random_collinear_triple, random_quadrangle, segre_from_four_planes, sigma_parametrization,
    subline_through, subplane_through, two_line_scroll, unique_transversal_plane, Conjugacy,
    SegreSystem,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SUITES: [&str; 9] = [
    "fields",
    "spread",
    "subline",
    "subplane",
    "conic",
    "fqconic",
    "cone",
    "extension",
    "scroll",
];

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub counters: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub timing_ms: u64,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            pass: true,
            counters: BTreeMap::new(),
            witness: None,
            timing_ms: 0,
        }
    }

    pub fn count(&mut self, key: &str, by: u64) {
        *self.counters.entry(key.to_string()).or_insert(0) += by;
    }

    pub fn set(&mut self, key: &str, value: u64) {
        self.counters.insert(key.to_string(), value);
    }

    /// Record a failure; only the first witness is kept.
    pub fn fail(&mut self, witness: Value) {
        self.pass = false;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    /// Fold a sub-report's counters and first failure into this one.
    pub fn absorb(&mut self, other: &CheckReport) {
        for (k, v) in &other.counters {
            self.count(k, *v);
        }
        if let Some(w) = &other.witness {
            self.fail(json!({ "from": other.name, "witness": w }));
        }
    }

    fn timed(mut self, start: Instant) -> Self {
        self.timing_ms = start.elapsed().as_millis() as u64;
        self
    }
}

// ---------------------------------------------------------------------------
// recognition predicates

fn plane_json(tower: &FieldTower, s: &Subspace) -> Value {
    s.to_json(tower)
}

/// Pairwise disjoint planes in one 5-space with the transversal-line
/// property: the line through each point of the first plane meeting the
/// second and third meets every listed plane.
pub fn check_2regulus(tower: &FieldTower, planes: &[Subspace]) -> Result<CheckReport> {
    if planes.len() < 3 {
        return Err(Error::TooFewPlanes {
            needed: 3,
            got: planes.len(),
        });
    }
    let mut rep = CheckReport::new("2regulus");
    rep.set("planes", planes.len() as u64);
    for (i, a) in planes.iter().enumerate() {
        for (j, b) in planes.iter().enumerate().skip(i + 1) {
            if a.meet_dim(tower, b) >= 0 {
                rep.fail(json!({ "kind": "planes meet", "i": i, "j": j }));
            }
        }
    }
    let refs: Vec<&Subspace> = planes.iter().collect();
    let all = span(tower, &refs)?;
    rep.set("span_dim", all.dim() as u64);
    if all.dim() != 5 {
        rep.fail(json!({ "kind": "not in a common 5-space", "span_dim": all.dim() }));
    }
    if !rep.pass {
        return Ok(rep);
    }
    let pts = planes[0].enumerate_points(tower, DEFAULT_CAP)?;
    for p in &pts {
        rep.count("points_tested", 1);
        let l1 = planes[1].join_point(tower, p)?;
        let l2 = planes[2].join_point(tower, p)?;
        let line = l1.meet(tower, &l2)?;
        if line.dim() != 1 {
            rep.fail(json!({ "kind": "no unique transversal line", "point": p.to_json(tower), "dim": line.dim() }));
            continue;
        }
        if let Some(k) = planes.iter().position(|pl| pl.meet_dim(tower, &line) < 0) {
            rep.count("transversal_failures", 1);
            rep.fail(json!({
                "kind": "transversal line misses a plane",
                "point": p.to_json(tower),
                "plane_index": k,
            }));
        }
    }
    Ok(rep)
}

/// Index quadruples i < j < k < l in lexicographic order.
fn quadruples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |i| {
        (i + 1..n)
            .flat_map(move |j| (j + 1..n).flat_map(move |k| (k + 1..n).map(move |l| [i, j, k, l])))
    })
}

/// Planes forming one system of maximal planes of a Segre variety S₂;₂:
/// the Segre variety is built from the first quadruple any three of which
/// span, and every plane must belong to the system containing them.
pub fn check_segre_system(tower: &FieldTower, planes: &[Subspace]) -> Result<CheckReport> {
    if planes.len() < 4 {
        return Err(Error::DegeneratePlanes);
    }
    let (idx, segre) = quadruples(planes.len())
        .find_map(|[i, j, k, l]| {
            segre_from_four_planes(tower, &planes[i], &planes[j], &planes[k], &planes[l])
                .ok()
                .map(|s| ([i, j, k, l], s))
        })
        .ok_or(Error::DegeneratePlanes)?;
    let mut rep = CheckReport::new("segre_system");
    rep.set("planes", planes.len() as u64);
    rep.set("system_size", segre.planes.len() as u64);
    rep.set("quadruple_first_index", idx[0] as u64);
    let variety = segre.variety();
    for (i, pl) in planes.iter().enumerate() {
        if segre.contains_plane(pl) {
            rep.count("in_system", 1);
        } else {
            rep.fail(json!({ "kind": "plane outside the system", "index": i, "plane": plane_json(tower, pl) }));
        }
        pl.for_each_point(tower, DEFAULT_CAP, |v| {
            rep.count("points_tested", 1);
            if !variety.contains(tower, pl.level(), v) {
                rep.count("quadric_failures", 1);
            }
        })?;
    }
    if rep.counters.get("quadric_failures").copied().unwrap_or(0) > 0 {
        rep.fail(json!({ "kind": "points off the nine quadrics" }));
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// order and dimension

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrderReport {
    pub ambient: usize,
    pub section_dim: usize,
    pub draws: u64,
    pub degenerate: u64,
    pub nondegenerate: u64,
    /// Buckets "0" … "10" and "overflow", over non-degenerate draws.
    pub histogram: BTreeMap<String, u64>,
    pub max_hits: u64,
    pub max_attained: u64,
    pub modal_hits: u64,
    /// Hits per draw; None for degenerate draws.
    #[serde(skip)]
    pub hits: Vec<Option<u64>>,
}

/// The random sections used by [`sample_order_dimension`], in draw order.
pub fn draw_sections(
    tower: &FieldTower,
    level: Level,
    n: usize,
    dim: usize,
    rng: &mut Rng,
    samples: usize,
) -> Vec<Subspace> {
    (0..samples)
        .map(|_| random_subspace(tower, level, n, dim as isize, rng))
        .collect()
}

/// Intersect a dimension-`d` variety of PG(n) with `samples` random
/// (n − d)-spaces and histogram the number of points hit. Draws meeting any
/// of `known` in a line or more are degenerate and excluded.
#[allow(clippy::too_many_arguments)]
pub fn sample_order_dimension(
    tower: &FieldTower,
    membership: &(dyn Fn(&[u32]) -> bool + Sync),
    n: usize,
    level: Level,
    rng: &mut Rng,
    samples: usize,
    d: usize,
    known: &[Subspace],
    cap: u64,
) -> Result<OrderReport> {
    if d > n {
        return Err(Error::DimensionMismatch(format!(
            "variety dimension {d} exceeds {n}"
        )));
    }
    let dim = n - d;
    let probe = Subspace::whole(level, dim).point_count(tower);
    if probe > cap as u128 {
        return Err(Error::TooLarge { count: probe, cap });
    }
    let draws = draw_sections(tower, level, n, dim, rng, samples);
    let hits: Vec<Option<u64>> = draws
        .par_iter()
        .map(|s| {
            if known.iter().any(|k| k.meet_dim(tower, s) >= 1) {
                return Ok(None);
            }
            let mut c = 0u64;
            s.for_each_point(tower, cap, |v| {
                if membership(v) {
                    c += 1;
                }
            })?;
            Ok(Some(c))
        })
        .collect::<Result<_>>()?;
    let mut histogram: BTreeMap<String, u64> = (0..=10).map(|i| (i.to_string(), 0)).collect();
    histogram.insert("overflow".into(), 0);
    let mut tally: BTreeMap<u64, u64> = BTreeMap::new();
    for h in hits.iter().flatten() {
        let key = if *h <= 10 {
            h.to_string()
        } else {
            "overflow".into()
        };
        *histogram.get_mut(&key).expect("bucket exists") += 1;
        *tally.entry(*h).or_insert(0) += 1;
    }
    let nondegenerate: u64 = tally.values().sum();
    let (max_hits, max_attained) = tally.iter().next_back().map_or((0, 0), |(&k, &v)| (k, v));
    let modal_hits = tally
        .iter()
        .max_by_key(|(&k, &v)| (v, std::cmp::Reverse(k)))
        .map_or(0, |(&k, _)| k);
    Ok(OrderReport {
        ambient: n,
        section_dim: dim,
        draws: samples as u64,
        degenerate: samples as u64 - nondegenerate,
        nondegenerate,
        histogram,
        max_hits,
        max_attained,
        modal_hits,
        hits,
    })
}

fn order_check(name: &str, rep: &OrderReport, ok: bool, expectation: &str) -> CheckReport {
    let mut c = CheckReport::new(name);
    c.set("draws", rep.draws);
    c.set("degenerate", rep.degenerate);
    c.set("nondegenerate", rep.nondegenerate);
    c.set("max_hits", rep.max_hits);
    c.set("max_attained", rep.max_attained);
    c.set("modal_hits", rep.modal_hits);
    for (k, v) in &rep.histogram {
        c.set(&format!("hist_{k}"), *v);
    }
    if !ok {
        c.fail(json!({ "expected": expectation, "histogram": rep.histogram, "max_hits": rep.max_hits }));
    }
    c
}

/// Dense membership bitmap for points of PG(n, q) given by their raw
/// coordinates.
pub struct PointSet {
    q: u64,
    bits: Vec<u64>,
}

impl PointSet {
    pub fn new(q: u32, n: usize, points: &[ProjPoint]) -> Self {
        let size = (q as u64).pow(n as u32 + 1);
        let mut s = PointSet {
            q: q as u64,
            bits: vec![0; (size as usize).div_ceil(64)],
        };
        for p in points {
            let i = s.index(p.coords());
            s.bits[i / 64] |= 1 << (i % 64);
        }
        s
    }

    fn index(&self, v: &[u32]) -> usize {
        v.iter().rev().fold(0u64, |acc, &c| acc * self.q + c as u64) as usize
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let i = self.index(v);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }
}

/// The canonical three-conic scroll at `level` with its membership set.
pub fn scroll_order_dimension(
    tower: &FieldTower,
    rng: &mut Rng,
    samples: usize,
    cap: u64,
) -> Result<OrderReport> {
    let scroll = canonical_conic_scroll(tower, Level::Base)?;
    let pts = scroll.points(tower, cap)?;
    let set = PointSet::new(tower.q(), 8, &pts);
    sample_order_dimension(
        tower,
        &|v| set.contains(v),
        8,
        Level::Base,
        rng,
        samples,
        3,
        &scroll.generators,
        cap,
    )
}

pub fn plane_order_control(
    tower: &FieldTower,
    rng: &mut Rng,
    samples: usize,
    cap: u64,
) -> Result<OrderReport> {
    let plane = Subspace::coordinate(tower, Level::Base, 8, &[0, 1, 2]);
    let p = plane.clone();
    sample_order_dimension(
        tower,
        &|v| p.contains_vec(tower, v),
        8,
        Level::Base,
        rng,
        samples,
        2,
        &[plane],
        cap,
    )
}

pub fn quadric_order_control(
    tower: &FieldTower,
    rng: &mut Rng,
    samples: usize,
    cap: u64,
) -> Result<OrderReport> {
    let scroll = two_line_scroll(tower, Level::Base)?;
    let pts = scroll.points(tower, cap)?;
    let set = PointSet::new(tower.q(), 3, &pts);
    // Both rulings: the generators and the lines {(λs, λt, μs, μt) : λ, μ}.
    let mut known = scroll.generators.clone();
    for t in Subspace::whole(Level::Base, 1).enumerate_points(tower, cap)? {
        let (s, u) = (t.coords()[0], t.coords()[1]);
        known.push(Subspace::new(
            tower,
            Level::Base,
            3,
            vec![vec![s, 0, u, 0], vec![0, s, 0, u]],
        )?);
    }
    sample_order_dimension(
        tower,
        &|v| set.contains(v),
        3,
        Level::Base,
        rng,
        samples,
        2,
        &known,
        cap,
    )
}

// ---------------------------------------------------------------------------
// batteries

fn tower_json(t: &FieldTower) -> Value {
    json!({ "q": t.q(), "modulus": t.modulus_string() })
}

/// Field axioms and Frobenius properties on random samples at each level.
pub fn check_field_axioms(tower: &FieldTower, rng: &mut Rng, samples: usize) -> CheckReport {
    let mut rep = CheckReport::new("field_axioms");
    for level in [Level::Base, Level::Cubic, Level::Sextic] {
        let f = tower.field(level);
        let mut r = rng.split(&format!("{level:?}"));
        for i in 0..samples {
            let (a, b, c) = (r.below(f.size()), r.below(f.size()), r.below(f.size()));
            rep.count("triples", 1);
            let assoc = f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                && f.add(f.add(a, b), c) == f.add(a, f.add(b, c));
            let distrib = f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c));
            let inverse = a == 0 || f.mul(a, f.inv(a)) == 1;
            let additive = f.add(a, f.neg(a)) == 0;
            let frob_hom = f.frob(f.add(a, b), 1) == f.add(f.frob(a, 1), f.frob(b, 1))
                && f.frob(f.mul(a, b), 1) == f.mul(f.frob(a, 1), f.frob(b, 1));
            let frob_pow = f.frob(a, 1) == f.pow(a, tower.q() as u64);
            if !(assoc && distrib && inverse && additive && frob_hom && frob_pow) {
                rep.fail(
                    json!({ "level": format!("{level:?}"), "index": i, "a": a, "b": b, "c": c }),
                );
            }
        }
    }
    rep
}

/// Frobenius fixes exactly the embedded subfield, and has the right order.
pub fn check_frobenius_fixed_points(tower: &FieldTower) -> CheckReport {
    let mut rep = CheckReport::new("frobenius_fixed_field");
    let f = tower.field(Level::Cubic);
    for x in f.elements() {
        rep.count("elements", 1);
        let fixed = f.frob(x, 1) == x;
        let rational = tower
            .try_descend(crate::FieldElem::new(Level::Cubic, x), Level::Base)
            .is_ok();
        if fixed != rational || f.frob(x, 3) != x {
            rep.fail(json!({ "element": tower.format_raw(Level::Cubic, x) }));
        }
    }
    let s = tower.field(Level::Sextic);
    for x in (0..s.size()).step_by(((s.size() / 4096) as usize).max(1)) {
        rep.count("sextic_elements", 1);
        let fixed3 = s.frob(x, 3) == x;
        if fixed3 != (x < f.size()) || s.frob(x, 6) != x {
            rep.fail(json!({ "sextic_element": tower.format_raw(Level::Sextic, x) }));
        }
    }
    rep
}

/// a₀ = −τ^q τ^{q²}, a₁ = τ^q + τ^{q²}, a₂ = −1; Γ and its conjugates are
/// pairwise disjoint, span PG(8,q³), and Γ has no rational points.
pub fn check_frame_identities(frame: &BoseFrame) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("frame_identities");
    let f = t.field(Level::Cubic);
    let tau = t.tau().raw();
    let (tq, tqq) = (f.frob(tau, 1), f.frob(tau, 2));
    let [a0, a1, a2] = frame.constants();
    if a0 != f.neg(f.mul(tq, tqq)) || a1 != f.add(tq, tqq) || a2 != f.neg(1) {
        rep.fail(json!({ "kind": "frame constants", "tower": tower_json(t) }));
    }
    let [g0, g1, g2] = frame.transversals();
    for (i, (a, b)) in [(g0, g1), (g0, g2), (g1, g2)].iter().enumerate() {
        if !a.meet(t, b)?.is_empty() {
            rep.fail(json!({ "kind": "transversals meet", "pair": i }));
        }
    }
    if span(t, &[g0, g1, g2])?.dim() != 8 {
        rep.fail(json!({ "kind": "transversals do not span" }));
    }
    if !g0.rational_points(t, Level::Base).is_empty() {
        rep.fail(json!({ "kind": "Γ has rational points" }));
    }
    rep.set("checked", 1);
    Ok(rep)
}

pub fn check_spread(frame: &BoseFrame, cap: u64) -> Result<CheckReport> {
    let r = frame.verify_spread(cap)?;
    let mut rep = CheckReport::new("spread_partition");
    rep.set("plane_count", r.plane_count);
    rep.set("points_covered", r.points_covered);
    rep.set("regular", r.regular as u64);
    for (m, c) in &r.multiplicity_histogram {
        rep.set(&format!("multiplicity_{m}"), *c);
    }
    if !r.pass {
        rep.fail(serde_json::to_value(&r).expect("serializable"));
    }
    Ok(rep)
}

/// Extended spread planes meet Γ exactly in the Γ-image of their point.
pub fn check_gamma_correspondence(
    frame: &BoseFrame,
    rng: &mut Rng,
    samples: usize,
) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("gamma_correspondence");
    let pts: Vec<ProjPoint> = if t.q() == 2 {
        frame.plane_points(Level::Cubic)
    } else {
        (0..samples)
            .map(|_| random_point(t, Level::Cubic, 2, rng))
            .collect()
    };
    for (i, p) in pts.iter().enumerate() {
        rep.count("points", 1);
        let pair = frame.bose_plane(p);
        let meet = pair.plane.embed(Level::Cubic).meet(t, frame.gamma())?;
        let via_rational = frame.rational_plane_through(&pair.gamma_x);
        if meet != pair.gamma_x.to_subspace() || via_rational != pair.plane {
            rep.fail(json!({ "index": i, "point": p.to_json(t) }));
        }
    }
    Ok(rep)
}

/// Collinear triples of PG(2,q³) ⇔ Bose planes in a common 5-space, and
/// each Bose line 5-space contains exactly q³ + 1 spread planes.
pub fn check_incidence(frame: &BoseFrame, rng: &mut Rng, samples: usize) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("incidence");
    let spread = frame.spread();
    let q3 = (t.q() as u64).pow(3);
    for i in 0..samples {
        let triple = if i % 2 == 0 {
            random_collinear_triple(t, rng)
        } else {
            std::array::from_fn(|_| random_point(t, Level::Cubic, 2, rng))
        };
        let collinear = Subspace::from_points(t, &triple)?.dim() <= 1;
        let planes: Vec<Subspace> = triple.iter().map(|p| frame.plane_of(p)).collect();
        let joined = span(t, &planes.iter().collect::<Vec<_>>())?;
        rep.count("triples", 1);
        if collinear != (joined.dim() <= 5) {
            rep.fail(json!({ "kind": "incidence", "index": i }));
        }
        if collinear && triple[0] != triple[1] {
            let line = Subspace::from_points(t, &triple[..2])?;
            let five = frame.bose_line(&line)?;
            let inside = spread.iter().filter(|s| five.contains(t, s)).count() as u64;
            rep.count("lines", 1);
            if inside != q3 + 1 || !planes.iter().all(|p| five.contains(t, p)) {
                rep.fail(json!({ "kind": "dual spread", "index": i, "planes_inside": inside }));
            }
        }
    }
    Ok(rep)
}

/// Bose planes of random sublines form 2-reguli in their Bose line.
pub fn check_subline_reguli(frame: &BoseFrame, rng: &mut Rng, count: usize) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("subline_regulus");
    for i in 0..count {
        let [a, b, c] = random_collinear_triple(t, rng);
        let sub = subline_through(t, &a, &b, &c)?;
        let planes: Vec<Subspace> = sub.points().iter().map(|p| frame.plane_of(p)).collect();
        let r = check_2regulus(t, &planes)?;
        let five = frame.bose_line(&sub.line)?;
        rep.count("sublines", 1);
        rep.count(
            "points_tested",
            r.counters.get("points_tested").copied().unwrap_or(0),
        );
        if !r.pass {
            rep.fail(json!({ "index": i, "reason": r.witness }));
        }
        if !planes.iter().all(|p| five.contains(t, p)) {
            rep.fail(json!({ "index": i, "reason": "plane outside the Bose line" }));
        }
    }
    Ok(rep)
}

/// Four random pairwise-disjoint planes of a random 5-space.
pub fn random_disjoint_planes(tower: &FieldTower, rng: &mut Rng, count: usize) -> Vec<Subspace> {
    let five = random_subspace(tower, Level::Base, 8, 5, rng);
    let mut planes: Vec<Subspace> = Vec::with_capacity(count);
    while planes.len() < count {
        let pts: Vec<ProjPoint> = (0..3)
            .map(|_| {
                let c: Vec<u32> = (0..6).map(|_| rng.below(tower.q())).collect();
                let v = five
                    .basis()
                    .iter()
                    .zip(&c)
                    .fold(vec![0u32; 9], |acc, (row, &k)| {
                        let f = tower.field(Level::Base);
                        acc.iter()
                            .zip(row)
                            .map(|(&a, &r)| f.add(a, f.mul(k, r)))
                            .collect()
                    });
                ProjPoint::new(tower, Level::Base, v)
            })
            .filter_map(|p| p.ok())
            .collect();
        if pts.len() < 3 {
            continue;
        }
        let Ok(plane) = Subspace::from_points(tower, &pts) else {
            continue;
        };
        if plane.dim() == 2 && planes.iter().all(|p| p.meet_dim(tower, &plane) < 0) {
            planes.push(plane);
        }
    }
    planes
}

/// Negative controls for the 2-regulus predicate: four random disjoint
/// planes in a random 5-space. Passes when every control is rejected.
pub fn check_regulus_negatives(
    tower: &FieldTower,
    rng: &mut Rng,
    count: usize,
) -> Result<CheckReport> {
    let mut rep = CheckReport::new("regulus_negative_controls");
    for i in 0..count {
        let planes = random_disjoint_planes(tower, rng, 4);
        let r = check_2regulus(tower, &planes)?;
        rep.count("controls", 1);
        if r.pass {
            rep.fail(json!({ "kind": "control accepted", "index": i }));
        } else {
            rep.count("rejected", 1);
        }
    }
    Ok(rep)
}

fn subplane_planes(
    frame: &BoseFrame,
    quad: &[ProjPoint; 4],
    points: &[ProjPoint],
) -> Vec<Subspace> {
    // Quadrangle planes first so the Segre variety is built from them.
    let mut out: Vec<Subspace> = quad.iter().map(|p| frame.plane_of(p)).collect();
    for p in points {
        if !quad.contains(p) {
            out.push(frame.plane_of(p));
        }
    }
    out
}

/// Bose planes of random subplanes form one system of a Segre S₂;₂.
pub fn check_subplane_segre(frame: &BoseFrame, rng: &mut Rng, count: usize) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("subplane_segre");
    for i in 0..count {
        let quad = random_quadrangle(t, rng);
        let sub = subplane_through(t, &quad)?;
        let planes = subplane_planes(frame, &quad, &sub.points);
        let r = check_segre_system(t, &planes)?;
        rep.count("subplanes", 1);
        rep.count("planes", planes.len() as u64);
        rep.count(
            "points_tested",
            r.counters.get("points_tested").copied().unwrap_or(0),
        );
        if !r.pass || planes.len() as u32 != t.q() * t.q() + t.q() + 1 {
            rep.fail(json!({ "index": i, "reason": r.witness }));
        }
    }
    Ok(rep)
}

/// The whole spread is not one system of a Segre variety.
pub fn check_segre_negative(frame: &BoseFrame) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("segre_negative_control");
    let r = check_segre_system(t, frame.spread())?;
    rep.set(
        "in_system",
        r.counters.get("in_system").copied().unwrap_or(0),
    );
    rep.set("planes", frame.spread().len() as u64);
    if r.pass {
        rep.fail(json!({ "kind": "spread accepted as a Segre system" }));
    }
    Ok(rep)
}

/// Conjugacy maps of subplanes fix π and have orbits of size 1 or 3.
pub fn check_subplane_conjugacy(
    frame: &BoseFrame,
    rng: &mut Rng,
    count: usize,
) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("subplane_conjugacy");
    for i in 0..count {
        let quad = random_quadrangle(t, rng);
        let sub = subplane_through(t, &quad)?;
        for p in &sub.points {
            if &sub.apply(t, p)? != p {
                rep.fail(json!({ "kind": "subplane point moved", "index": i }));
            }
        }
        for _ in 0..10 {
            let x = random_point(t, Level::Cubic, 2, rng);
            let orbit =
                (1..=3).find(|&k| sub.apply_power(t, &x, k).map(|y| y == x).unwrap_or(false));
            rep.count("orbits", 1);
            let want = if sub.contains(&x) { 1 } else { 3 };
            if orbit != Some(want) {
                rep.fail(json!({ "kind": "orbit size", "index": i, "point": x.to_json(t) }));
            }
        }
    }
    Ok(rep)
}

/// Compare V(f₀, f₁, f₂) with the union of the Bose planes of the conic's
/// points. Returns the size of the variety and whether the two agree.
fn conic_plane_union(frame: &BoseFrame, conic: &HomogeneousForm, cap: u64) -> Result<(u64, bool)> {
    let t = frame.tower();
    let q = t.q() as u64;
    let quadrics = conic_to_quadrics(t, conic)?;
    let v = VarietyHandle::new(Level::Base, 8, quadrics.to_vec())?;
    let pts = v.points(t, &Subspace::whole(Level::Base, 8), cap)?;
    let on = VarietyHandle::new(Level::Cubic, 2, vec![conic.clone()])?.points(
        t,
        &Subspace::whole(Level::Cubic, 2),
        cap,
    )?;
    let mut union = BTreeSet::new();
    for p in &on {
        union.extend(frame.plane_of(p).enumerate_points(t, cap)?);
    }
    let expect = (q.pow(3) + 1) * (q * q + q + 1);
    let ok = pts.len() as u64 == expect && union.into_iter().eq(pts.iter().cloned());
    Ok((pts.len() as u64, ok))
}

/// V(f₀, f₁, f₂) in PG(8,q) is the union of the Bose planes of the points
/// of a conic, with (q³ + 1)(q² + q + 1) points.
pub fn check_conic_planes(
    frame: &BoseFrame,
    rng: &mut Rng,
    count: usize,
    cap: u64,
) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("conic_planes");
    for i in 0..count {
        let c = random_conic(t, Level::Cubic, rng);
        let (n, ok) = conic_plane_union(frame, &c, cap)?;
        rep.count("conics", 1);
        rep.count("points", n);
        if !ok {
            rep.fail(json!({ "index": i, "form": c.format(t), "points": n }));
        }
    }
    Ok(rep)
}

/// The plane-union check for one given conic.
pub fn check_given_conic(
    frame: &BoseFrame,
    conic: &HomogeneousForm,
    cap: u64,
) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("given_conic");
    let (n, ok) = conic_plane_union(frame, conic, cap)?;
    rep.set("points", n);
    if !ok {
        rep.fail(json!({ "form": conic.format(t), "points": n }));
    }
    Ok(rep)
}

/// Random points of the T-plane ⟨X, Y^q, Z^{q²}⟩ for X, Y, Z on Γ.
fn t_plane(frame: &BoseFrame, x: &ProjPoint, y: &ProjPoint, z: &ProjPoint) -> Result<Subspace> {
    let t = frame.tower();
    Subspace::from_points(
        t,
        &[
            frame.gamma_point(x),
            frame.gamma_point(y).frobenius(t, 1),
            frame.gamma_point(z).frobenius(t, 2),
        ],
    )
}

/// Over GF(q³), the extension of V(f₀, f₁, f₂) is V(G, G^q, G^{q²}), and
/// T-planes over points of the curve lie in it.
pub fn check_conic_extension(
    frame: &BoseFrame,
    rng: &mut Rng,
    samples: usize,
    planes: usize,
) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("conic_extension");
    let c = random_conic(t, Level::Cubic, rng);
    let e = expand_form(t, &c)?;
    let ext = VarietyHandle::new(Level::Base, 8, e.parts.to_vec())?.extend(Level::Cubic)?;
    let conj = VarietyHandle::new(
        Level::Cubic,
        8,
        vec![e.g.clone(), e.g.conjugate(t, 1), e.g.conjugate(t, 2)],
    )?;
    if e.recombine(t) != e.g {
        rep.fail(json!({ "kind": "G ≠ f₀ + τf₁ + τ²f₂" }));
    }
    let compare = |rep: &mut CheckReport, v: &[u32], what: &str| {
        rep.count("points", 1);
        let a = ext.contains(t, Level::Cubic, v);
        let b = conj.contains(t, Level::Cubic, v);
        if a {
            rep.count("zeros", 1);
        }
        if a != b {
            rep.fail(json!({ "kind": what, "point": ProjPoint::new(t, Level::Cubic, v.to_vec()).map(|p| p.to_json(t)).ok() }));
        }
    };
    for _ in 0..samples {
        let p = random_point(t, Level::Cubic, 8, rng);
        compare(&mut rep, p.coords(), "random point");
    }
    let on = VarietyHandle::new(Level::Cubic, 2, vec![c.clone()])?.points(
        t,
        &Subspace::whole(Level::Cubic, 2),
        DEFAULT_CAP,
    )?;
    for i in 0..planes {
        // Alternate arbitrary T-planes with T-planes over the curve.
        let pick = |rng: &mut Rng| -> ProjPoint {
            if i % 2 == 0 {
                random_point(t, Level::Cubic, 2, rng)
            } else {
                on[rng.below(on.len() as u32) as usize].clone()
            }
        };
        let (x, y, z) = (pick(rng), pick(rng), pick(rng));
        let plane = t_plane(frame, &x, &y, &z)?;
        let mut bad = false;
        plane.for_each_point(t, DEFAULT_CAP, |v| {
            compare(&mut rep, v, "T-plane point");
            if i % 2 == 1 && !conj.contains(t, Level::Cubic, v) {
                bad = true;
            }
        })?;
        rep.count("t_planes", 1);
        if bad {
            rep.fail(
                json!({ "kind": "T-plane over the curve leaves V(G, G^q, G^{q²})", "plane": i }),
            );
        }
    }
    Ok(rep)
}

/// Expansion is GF(q)-linear.
pub fn check_expansion_linearity(
    tower: &FieldTower,
    rng: &mut Rng,
    count: usize,
) -> Result<CheckReport> {
    let mut rep = CheckReport::new("expansion_linearity");
    for i in 0..count {
        let deg = 1 + rng.below(3);
        let a = random_form(tower, Level::Cubic, 3, deg, rng);
        let b = random_form(tower, Level::Cubic, 3, deg, rng);
        let sum = a.add(tower, &b)?;
        let (ea, eb, es) = (
            expand_form(tower, &a)?,
            expand_form(tower, &b)?,
            expand_form(tower, &sum)?,
        );
        rep.count("pairs", 1);
        for k in 0..3 {
            if es.parts[k] != ea.parts[k].add(tower, &eb.parts[k])? {
                rep.fail(json!({ "index": i, "part": k }));
            }
        }
        if es.recombine(tower) != es.g {
            rep.fail(json!({ "index": i, "kind": "recombination" }));
        }
    }
    Ok(rep)
}

/// For random curves of degree ≤ 3, the GF(q)-points of V(f₀, f₁, f₂) are
/// the union of the Bose planes of the curve's points.
pub fn check_curve_planes(
    frame: &BoseFrame,
    rng: &mut Rng,
    count: usize,
    cap: u64,
) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("curve_planes");
    for i in 0..count {
        let deg = 1 + rng.below(3);
        let c = random_form(t, Level::Cubic, 3, deg, rng);
        if c.is_zero() {
            continue;
        }
        let e = expand_form(t, &c)?;
        let pts = VarietyHandle::new(Level::Base, 8, e.parts.to_vec())?.points(
            t,
            &Subspace::whole(Level::Base, 8),
            cap,
        )?;
        let on = VarietyHandle::new(Level::Cubic, 2, vec![c.clone()])?.points(
            t,
            &Subspace::whole(Level::Cubic, 2),
            cap,
        )?;
        let mut union = BTreeSet::new();
        for p in &on {
            union.extend(frame.plane_of(p).enumerate_points(t, cap)?);
        }
        rep.count("curves", 1);
        if union.into_iter().collect::<Vec<_>>() != pts {
            rep.fail(json!({ "index": i, "form": c.format(t) }));
        }
    }
    Ok(rep)
}

/// The Bose cone: V(G) is the cone with vertex ⟨Γ^q, Γ^{q²}⟩ over the
/// Γ-image of the conic. With `wrong_base` the base is replaced by another
/// conic and the projection check must fail.
pub fn check_cone(
    frame: &BoseFrame,
    rng: &mut Rng,
    samples: usize,
    wrong_base: bool,
) -> Result<CheckReport> {
    let t = frame.tower();
    let name = if wrong_base {
        "cone_wrong_base"
    } else {
        "cone"
    };
    let mut rep = CheckReport::new(name);
    let c = HomogeneousForm::parse(t, Level::Cubic, 3, "x*z:1, y^2:-1")?;
    let g = expand_form(t, &c)?.g;
    let whole2 = Subspace::whole(Level::Cubic, 2);
    let base_form = if wrong_base {
        // A conic sharing at most two points with the first.
        let mut r = rng.split("wrong base");
        loop {
            let d = random_conic(t, Level::Cubic, &mut r);
            let a = VarietyHandle::new(Level::Cubic, 2, vec![c.clone(), d.clone()])?.points(
                t,
                &whole2,
                DEFAULT_CAP,
            )?;
            if a.len() <= 2 {
                break d;
            }
        }
    } else {
        c.clone()
    };
    let base: Vec<ProjPoint> = VarietyHandle::new(Level::Cubic, 2, vec![base_form])?
        .points(t, &whole2, DEFAULT_CAP)?
        .iter()
        .map(|p| frame.gamma_point(p))
        .collect();
    let [g0, g1, g2] = frame.transversals();
    let vertex = g1.join(t, g2)?;
    for p in vertex.basis_points() {
        if g.eval_point(t, &p) != 0 {
            rep.fail(json!({ "kind": "vertex basis point is not a zero" }));
        }
    }
    let r = verify_cone(t, &g, &base, g0, &vertex, rng, samples)?;
    for (k, v) in [
        ("line_samples", r.line_samples),
        ("line_failures", r.line_failures),
        ("vertex_samples", r.vertex_samples),
        ("vertex_failures", r.vertex_failures),
        ("zeros_found", r.zeros_found),
        ("draws", r.draws),
        ("vertex_zeros", r.vertex_zeros),
        ("projections_in_base", r.projections_in_base),
        ("projection_failures", r.projection_failures),
    ] {
        rep.set(k, v);
    }
    if wrong_base {
        if r.projection_failures == 0 {
            rep.fail(json!({ "kind": "wrong base accepted" }));
        }
    } else if !r.pass {
        rep.fail(json!({ "kind": "cone check failed", "witness": r.witness }));
    }
    Ok(rep)
}

/// Segre variety of a subplane's Bose planes.
pub fn subplane_segre(frame: &BoseFrame, quad: &[ProjPoint; 4]) -> Result<SegreSystem> {
    let t = frame.tower();
    let planes: Vec<Subspace> = quad.iter().map(|p| frame.plane_of(p)).collect();
    segre_from_four_planes(t, &planes[0], &planes[1], &planes[2], &planes[3])
}

/// Bracket planes of points of Γ off the subplane lie on the extended
/// Segre variety and contain no rational points.
pub fn check_bracket_planes(frame: &BoseFrame, rng: &mut Rng, count: usize) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("bracket_planes");
    let quad = random_quadrangle(t, rng);
    let sub = subplane_through(t, &quad)?;
    let segre = subplane_segre(frame, &quad)?;
    let ext = VarietyHandle::new(Level::Cubic, 8, segre.quadrics_at(Level::Cubic))?;
    let mut i = 0;
    while (rep.counters.get("planes").copied().unwrap_or(0) as usize) < count {
        let bar = random_point(t, Level::Cubic, 2, rng);
        if sub.contains(&bar) {
            continue;
        }
        let x = frame.gamma_point(&bar);
        let plane = bracket_plane(t, &sub, frame, &x)?;
        rep.count("planes", 1);
        let mut off = 0u64;
        plane.for_each_point(t, DEFAULT_CAP, |v| {
            rep.count("points", 1);
            if !ext.contains(t, Level::Cubic, v) {
                off += 1;
            }
        })?;
        if off > 0 || plane.dim() != 2 {
            rep.fail(json!({ "kind": "bracket plane leaves the Segre", "index": i, "off": off }));
        }
        if !plane.rational_points(t, Level::Base).is_empty() {
            rep.fail(json!({ "kind": "bracket plane has rational points", "index": i }));
        }
        i += 1;
    }
    for p in &sub.points {
        let plane = bracket_plane(t, &sub, frame, &frame.gamma_point(p))?;
        if plane != frame.plane_of(p).embed(Level::Cubic) {
            rep.fail(json!({ "kind": "bracket plane of a subplane point", "point": p.to_json(t) }));
        }
    }
    Ok(rep)
}

/// Bracket planes at sextic level stay on the extended Segre variety.
pub fn check_sextic_bracket_planes(
    frame: &BoseFrame,
    rng: &mut Rng,
    count: usize,
) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("sextic_bracket_planes");
    let quad = random_quadrangle(t, rng);
    let sub = subplane_through(t, &quad)?;
    let segre = subplane_segre(frame, &quad)?;
    let ext = VarietyHandle::new(Level::Sextic, 8, segre.quadrics_at(Level::Sextic))?;
    for i in 0..count {
        let bar = random_point(t, Level::Sextic, 2, rng);
        let plane = bracket_plane(t, &sub, frame, &frame.gamma_point(&bar))?;
        rep.count("planes", 1);
        for _ in 0..64 {
            let f = t.field(Level::Sextic);
            let v = plane.basis().iter().fold(vec![0u32; 9], |acc, row| {
                let c = rng.below(f.size());
                acc.iter()
                    .zip(row)
                    .map(|(&a, &r)| f.add(a, f.mul(c, r)))
                    .collect()
            });
            rep.count("points", 1);
            if !ext.contains(t, Level::Sextic, &v) {
                rep.fail(json!({ "index": i, "kind": "sextic bracket point off the Segre" }));
            }
        }
    }
    for p in sub.points.iter().take(3) {
        let x = frame.gamma_point(&p.embed(Level::Sextic));
        let plane = bracket_plane(t, &sub, frame, &x)?;
        if plane != frame.plane_of(p).embed(Level::Sextic) {
            rep.fail(json!({ "kind": "sextic bracket plane of a subplane point" }));
        }
    }
    Ok(rep)
}

/// The q³ + 1 bracket planes of a subline's line are pairwise disjoint, lie
/// in the extended Bose line, and have the transversal-line property.
pub fn check_subline_extension(frame: &BoseFrame, rng: &mut Rng) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("subline_extension");
    let [a, b, c] = random_collinear_triple(t, rng);
    let sub = subline_through(t, &a, &b, &c)?;
    let five = frame.bose_line(&sub.line)?.embed(Level::Cubic);
    let planes: Vec<Subspace> = sub
        .line
        .enumerate_points(t, DEFAULT_CAP)?
        .iter()
        .map(|p| bracket_plane(t, &sub, frame, &frame.gamma_point(p)))
        .collect::<Result<_>>()?;
    rep.set("extended_planes", planes.len() as u64);
    for (i, p) in planes.iter().enumerate() {
        if !five.contains(t, p) {
            rep.fail(json!({ "kind": "plane outside the extended Bose line", "index": i }));
        }
    }
    let r = check_2regulus(t, &planes)?;
    rep.absorb(&r);
    Ok(rep)
}

/// Two T-planes are equal, disjoint, meet in a point of a transversal, or
/// meet in a line joining two transversals.
pub fn check_t_planes(frame: &BoseFrame, rng: &mut Rng, count: usize) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("t_planes");
    let [g0, g1, g2] = frame.transversals();
    let on_gamma = |x: &Subspace| [g0, g1, g2].iter().filter(|g| g.contains(t, x)).count();
    let meets = |x: &Subspace| {
        [g0, g1, g2]
            .iter()
            .filter(|g| g.meet_dim(t, x) >= 0)
            .count()
    };
    // Small pools on each transversal make coincidences likely.
    let pool: Vec<Vec<ProjPoint>> = (0..3)
        .map(|k| {
            (0..3)
                .map(|_| {
                    frame
                        .gamma_point(&random_point(t, Level::Cubic, 2, rng))
                        .frobenius(t, k)
                })
                .collect()
        })
        .collect();
    let draw = |rng: &mut Rng, i: usize| -> Result<Subspace> {
        if i.is_multiple_of(2) {
            loop {
                let p = random_point(t, Level::Cubic, 8, rng);
                match unique_transversal_plane(t, &p, g0, g1, g2) {
                    Ok(s) => return Ok(s),
                    Err(Error::PointOnTransversalLine) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        let pts: Vec<ProjPoint> = (0..3)
            .map(|k| pool[k][rng.below(3) as usize].clone())
            .collect();
        Subspace::from_points(t, &pts)
    };
    for i in 0..count {
        let a = draw(rng, 2 * i + 1)?;
        let b = if i % 4 == 0 {
            draw(rng, 0)?
        } else {
            draw(rng, 1)?
        };
        let m = a.meet(t, &b)?;
        let kind = match m.dim() {
            _ if a == b => "equal",
            -1 => "disjoint",
            0 if on_gamma(&m) == 1 => "t_point",
            1 if meets(&m) >= 2 => "t_line",
            _ => "other",
        };
        rep.count(kind, 1);
        if kind == "other" {
            rep.fail(json!({ "index": i, "meet_dim": m.dim() }));
        }
    }
    Ok(rep)
}

/// Number of planes through `p` in PG(8,q) meeting all of α, β, γ.
pub fn count_transversal_planes(
    tower: &FieldTower,
    p: &ProjPoint,
    planes: [&Subspace; 3],
) -> Result<(u64, u64)> {
    let q = tower.q();
    let lead = p
        .coords()
        .iter()
        .position(|&c| c != 0)
        .ok_or(Error::ZeroVector)?;
    let free: Vec<usize> = (0..9).filter(|&i| i != lead).collect();
    // Lines of the quotient by p: 2-dimensional subspaces of the coordinate
    // complement, by pivot pair in echelon form.
    let pairs: Vec<(usize, usize)> = (0..8)
        .flat_map(|i| (i + 1..8).map(move |j| (i, j)))
        .collect();
    let counts: Vec<(u64, u64)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let f1: Vec<usize> = (i + 1..8).filter(|&k| k != j).collect();
            let f2: Vec<usize> = (j + 1..8).collect();
            let total = (q as u64).pow((f1.len() + f2.len()) as u32);
            let mut found = 0u64;
            for code in 0..total {
                let mut c = code;
                let mut r1 = vec![0u32; 9];
                let mut r2 = vec![0u32; 9];
                r1[free[i]] = 1;
                r2[free[j]] = 1;
                for &k in &f1 {
                    r1[free[k]] = (c % q as u64) as u32;
                    c /= q as u64;
                }
                for &k in &f2 {
                    r2[free[k]] = (c % q as u64) as u32;
                    c /= q as u64;
                }
                let plane = Subspace::new(tower, Level::Base, 8, vec![p.coords().to_vec(), r1, r2])
                    .expect("lengths");
                if planes.iter().all(|s| s.meet_dim(tower, &plane) >= 0) {
                    found += 1;
                }
            }
            (total, found)
        })
        .collect();
    Ok(counts.iter().fold((0, 0), |(a, b), (c, d)| (a + c, b + d)))
}

/// Exhaustive uniqueness of transversal planes through random points.
pub fn check_transversal_uniqueness(
    tower: &FieldTower,
    rng: &mut Rng,
    count: usize,
) -> Result<CheckReport> {
    let mut rep = CheckReport::new("transversal_uniqueness");
    let blocks: [Subspace; 3] = std::array::from_fn(|b| {
        Subspace::coordinate(tower, Level::Base, 8, &[3 * b, 3 * b + 1, 3 * b + 2])
    });
    let mut tested = 0;
    while tested < count {
        let p = random_point(tower, Level::Base, 8, rng);
        let Ok(plane) = unique_transversal_plane(tower, &p, &blocks[0], &blocks[1], &blocks[2])
        else {
            continue;
        };
        tested += 1;
        let (total, found) =
            count_transversal_planes(tower, &p, [&blocks[0], &blocks[1], &blocks[2]])?;
        rep.set("planes_through_point", total);
        rep.count("points", 1);
        rep.count("transversals_found", found);
        let meets_all = blocks.iter().all(|b| b.meet_dim(tower, &plane) == 0);
        if found != 1 || !plane.contains_point(tower, &p) || !meets_all {
            rep.fail(json!({ "point": p.to_json(tower), "found": found }));
        }
    }
    Ok(rep)
}

/// The GF(q)-conic of a random subplane: its Bose planes are the points of
/// the variety of three conic quadrics and the nine Segre minors.
pub fn check_fq_conic_variety(
    frame: &BoseFrame,
    rng: &mut Rng,
    count: usize,
    cap: u64,
) -> Result<CheckReport> {
    let t = frame.tower();
    let mut rep = CheckReport::new("fq_conic_variety");
    let q = t.q() as u64;
    if q <= 3 {
        rep.set("cplus_defined_by_form_transport", 1);
    }
    for i in 0..count {
        let quad = random_quadrangle(t, rng);
        let sub = subplane_through(t, &quad)?;
        let c = random_conic(t, Level::Base, rng);
        let con = fq_conic(t, &sub, &c)?;
        let in_pi = sub
            .points
            .iter()
            .filter(|p| con.cplus.eval_point(t, p) == 0)
            .count();
        let segre = subplane_segre(frame, &quad)?;
        let mut forms = conic_to_quadrics(t, &con.cplus)?.to_vec();
        forms.extend(segre.quadrics.iter().cloned());
        let v = VarietyHandle::new(Level::Base, 8, forms)?;
        let pts = v.points(t, &Subspace::whole(Level::Base, 8), cap)?;
        let mut union = BTreeSet::new();
        for p in &con.points {
            union.extend(frame.plane_of(p).enumerate_points(t, cap)?);
        }
        rep.count("conics", 1);
        rep.count("points", pts.len() as u64);
        let expect = (q + 1) * (q * q + q + 1);
        if pts.len() as u64 != expect
            || union.into_iter().collect::<Vec<_>>() != pts
            || in_pi != con.points.len()
        {
            rep.fail(json!({ "index": i, "points": pts.len(), "expected": expect }));
        }
    }
    Ok(rep)
}

/// Over GF(q³): bracket planes of points of C⁺ lie on the twelve quadrics,
/// and random common zeros of the quadrics lie on such bracket planes.
pub fn check_fq_conic_extension(
    frame: &BoseFrame,
    rng: &mut Rng,
    planes: usize,
    zeros: usize,
) -> Result<CheckReport> {
    let t = frame.tower();
    let f = t.field(Level::Cubic);
    let mut rep = CheckReport::new("fq_conic_extension");
    if t.q() <= 3 {
        rep.set("cplus_defined_by_form_transport", 1);
    }
    let quad = random_quadrangle(t, rng);
    let sub = subplane_through(t, &quad)?;
    let c = random_conic(t, Level::Base, rng);
    let con = fq_conic(t, &sub, &c)?;
    let segre = subplane_segre(frame, &quad)?;
    let conic_q = conic_to_quadrics(t, &con.cplus)?;
    let conic_v = VarietyHandle::new(Level::Cubic, 8, conic_q.to_vec())?;
    let mut forms = conic_q.to_vec();
    forms.extend(segre.quadrics.iter().cloned());
    let all = VarietyHandle::new(Level::Cubic, 8, forms)?;
    let cplus_pts = VarietyHandle::new(Level::Cubic, 2, vec![con.cplus.clone()])?.points(
        t,
        &Subspace::whole(Level::Cubic, 2),
        DEFAULT_CAP,
    )?;

    for k in 0..planes.min(cplus_pts.len()) {
        let bar = &cplus_pts[(k * cplus_pts.len()) / planes.min(cplus_pts.len())];
        let plane = bracket_plane(t, &sub, frame, &frame.gamma_point(bar))?;
        rep.count("bracket_planes", 1);
        plane.for_each_point(t, DEFAULT_CAP, |v| {
            rep.count("bracket_points", 1);
            if !all.contains(t, Level::Cubic, v) {
                rep.count("bracket_failures", 1);
            }
        })?;
    }
    if rep.counters.get("bracket_failures").copied().unwrap_or(0) > 0 {
        rep.fail(json!({ "kind": "bracket plane point off the quadrics" }));
    }

    // Converse: points M(u ⊗ v) of the extended Segre on the conic quadrics.
    let frame_m = segre.frame.embed(Level::Cubic);
    let [g0, g1, g2] = frame.transversals();
    let mut found = 0usize;
    let mut draws = 0u64;
    let budget = 4096 * zeros as u64;
    while found < zeros {
        if draws >= budget {
            return Err(Error::SamplingExhausted {
                found,
                needed: zeros,
                draws,
            });
        }
        draws += 1;
        let u: Vec<u32> = (0..3).map(|_| rng.below(f.size())).collect();
        let w: Vec<u32> = (0..3).map(|_| rng.below(f.size())).collect();
        let mut y = vec![0u32; 9];
        for i in 0..3 {
            for k in 0..3 {
                y[3 * i + k] = f.mul(u[i], w[k]);
            }
        }
        let x = frame_m.mul_vec(t, &y);
        let Ok(p) = ProjPoint::new(t, Level::Cubic, x) else {
            continue;
        };
        if !conic_v.contains_point(t, &p) {
            continue;
        }
        found += 1;
        rep.count("zeros", 1);
        if !all.contains_point(t, &p) {
            rep.fail(json!({ "kind": "sampled point off the Segre", "point": p.to_json(t) }));
            continue;
        }
        match locate_bracket(frame, &sub, &con.cplus, &p, [g0, g1, g2])? {
            true => rep.count("located", 1),
            false => rep.fail(json!({ "kind": "zero not on a bracket plane of C⁺", "point": p.to_json(t), "draw": draws })),
        }
    }
    rep.set("draws", draws);
    Ok(rep)
}

/// Whether `p` lies on the bracket plane of some point of V(cplus) ⊂ Γ,
/// recovering the candidate from the first nonzero component of p over
/// Γ ⊕ Γ^q ⊕ Γ^{q²}.
fn locate_bracket(
    frame: &BoseFrame,
    sub: &crate::substructures::SubplaneFrame,
    cplus: &HomogeneousForm,
    p: &ProjPoint,
    gammas: [&Subspace; 3],
) -> Result<bool> {
    let t = frame.tower();
    let f = t.field(Level::Cubic);
    let mut basis = Vec::with_capacity(9);
    for g in gammas {
        basis.extend(g.basis().iter().cloned());
    }
    let m = crate::projgeom::Matrix::from_columns(Level::Cubic, &basis);
    let c = m.inverse(t)?.mul_vec(t, p.coords());
    for k in 0..3 {
        let comp = (0..3).fold(vec![0u32; 9], |acc, j| {
            acc.iter()
                .zip(&basis[3 * k + j])
                .map(|(&a, &b)| f.add(a, f.mul(c[3 * k + j], b)))
                .collect()
        });
        let Ok(comp) = ProjPoint::new(t, Level::Cubic, comp) else {
            continue;
        };
        // Undo the Frobenius twist of the k-th transversal, then the
        // conjugacy power used by the bracket plane.
        let on_gamma = comp.frobenius(t, (3 - k as u32) % 3);
        let y = frame.bar_of_gamma(&on_gamma)?;
        let bar = match k {
            0 => y,
            1 => sub.apply_power(t, &y, 1)?,
            _ => sub.apply_power(t, &y, 2)?,
        };
        if cplus.eval_point(t, &bar) != 0 {
            return Ok(false);
        }
        let plane = bracket_plane(t, sub, frame, &frame.gamma_point(&bar))?;
        return Ok(plane.contains_point(t, p));
    }
    Ok(false)
}

/// Two-line scroll equals the hyperbolic quadric.
pub fn check_hyperbolic_scroll(tower: &FieldTower, cap: u64) -> Result<CheckReport> {
    let mut rep = CheckReport::new("hyperbolic_scroll");
    let q = tower.q() as u64;
    let s = two_line_scroll(tower, Level::Base)?;
    let pts = s.points(tower, cap)?;
    let quad = HomogeneousForm::parse(tower, Level::Base, 4, "x0*x3:1, x1*x2:-1")?;
    let v = VarietyHandle::new(Level::Base, 3, vec![quad])?.points(
        tower,
        &Subspace::whole(Level::Base, 3),
        cap,
    )?;
    rep.set("points", pts.len() as u64);
    rep.set("generators", s.generators.len() as u64);
    if pts != v || pts.len() as u64 != (q + 1) * (q + 1) {
        rep.fail(json!({ "scroll_points": pts.len(), "quadric_points": v.len() }));
    }
    Ok(rep)
}

/// Three-conic scroll: q + 1 disjoint generator planes whose union is the
/// zero set of the scroll's twelve quadrics.
pub fn check_conic_scroll(tower: &FieldTower, cap: u64) -> Result<CheckReport> {
    let mut rep = CheckReport::new("conic_scroll");
    let q = tower.q() as u64;
    let s = canonical_conic_scroll(tower, Level::Base)?;
    let pts = s.points(tower, cap)?;
    rep.set("points", pts.len() as u64);
    rep.set("generators", s.generators.len() as u64);
    for (i, a) in s.generators.iter().enumerate() {
        for (j, b) in s.generators.iter().enumerate().skip(i + 1) {
            if a.meet_dim(tower, b) >= 0 {
                rep.fail(json!({ "kind": "generators meet", "i": i, "j": j }));
            }
        }
    }
    let v = canonical_conic_scroll_variety(tower, Level::Base).points(
        tower,
        &Subspace::whole(Level::Base, 8),
        cap,
    )?;
    if pts != v
        || pts.len() as u64 != (q + 1) * (q * q + q + 1)
        || s.generators.len() as u64 != q + 1
    {
        rep.fail(json!({ "scroll_points": pts.len(), "variety_points": v.len() }));
    }
    Ok(rep)
}

/// Image of σ over all admissible parameters of PG(3,q), against the
/// scroll's points.
#[derive(Clone, Debug, Serialize)]
pub struct SigmaSummary {
    pub admissible: u64,
    pub kernel: u64,
    pub image: u64,
    pub scroll: u64,
    pub image_in_scroll: bool,
    pub injective_off_y0_zero: bool,
    pub bijective: bool,
    pub missing_example: Option<Vec<u32>>,
}

pub fn sigma_summary(tower: &FieldTower, cap: u64) -> Result<SigmaSummary> {
    let scroll: BTreeSet<ProjPoint> = canonical_conic_scroll(tower, Level::Base)?
        .points(tower, cap)?
        .into_iter()
        .collect();
    let mut image = BTreeSet::new();
    let mut affine_images = HashSet::new();
    let mut injective = true;
    let (mut admissible, mut kernel) = (0, 0);
    for y in Subspace::whole(Level::Base, 3).enumerate_points(tower, cap)? {
        let c = y.coords();
        match sigma_parametrization(tower, Level::Base, &[c[0], c[1], c[2], c[3]]) {
            Ok(p) => {
                admissible += 1;
                if c[0] != 0 && !affine_images.insert(p.clone()) {
                    injective = false;
                }
                image.insert(p);
            }
            Err(Error::KernelPoint) => kernel += 1,
            Err(e) => return Err(e),
        }
    }
    let missing = scroll
        .difference(&image)
        .next()
        .map(|p| p.coords().to_vec());
    Ok(SigmaSummary {
        admissible,
        kernel,
        image: image.len() as u64,
        scroll: scroll.len() as u64,
        image_in_scroll: image.is_subset(&scroll),
        injective_off_y0_zero: injective,
        bijective: image == scroll && admissible == image.len() as u64,
        missing_example: missing,
    })
}

/// σ maps the admissible parameters bijectively onto the scroll.
pub fn check_sigma_bijection(tower: &FieldTower, cap: u64) -> Result<CheckReport> {
    let s = sigma_summary(tower, cap)?;
    let mut rep = CheckReport::new("sigma_bijection");
    rep.set("admissible", s.admissible);
    rep.set("kernel", s.kernel);
    rep.set("image", s.image);
    rep.set("scroll", s.scroll);
    if !s.bijective {
        rep.fail(serde_json::to_value(&s).expect("serializable"));
    }
    Ok(rep)
}

/// σ lands on the scroll and is injective where y₀ ≠ 0.
pub fn check_sigma_birational(tower: &FieldTower, cap: u64) -> Result<CheckReport> {
    let s = sigma_summary(tower, cap)?;
    let mut rep = CheckReport::new("sigma_birational");
    rep.set("image", s.image);
    rep.set("scroll", s.scroll);
    if !(s.image_in_scroll && s.injective_off_y0_zero) {
        rep.fail(serde_json::to_value(&s).expect("serializable"));
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// suites

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteParams {
    pub q: u32,
    /// Cubic modulus (t₀, t₁, t₂) as base-field raws; None picks the first
    /// primitive cubic.
    pub modulus: Option<[u32; 3]>,
    pub seed: u64,
    pub samples: usize,
    pub cap: u64,
    /// A ternary form over GF(q³) checked in addition by the conic suite.
    #[serde(default)]
    pub form: Option<String>,
}

impl SuiteParams {
    pub fn new(q: u32, seed: u64, samples: usize) -> Self {
        SuiteParams {
            q,
            modulus: None,
            seed,
            samples,
            cap: DEFAULT_CAP,
            form: None,
        }
    }

    pub fn tower(&self) -> Result<FieldTower> {
        let (p, e) = split_prime_power(self.q).ok_or(Error::UnsupportedField(self.q as u64))?;
        match self.modulus {
            Some(m) => FieldTower::new(p, e, m),
            None => FieldTower::with_default_modulus(p, e),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportParams {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub modulus: String,
    pub sextic_modulus: String,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SuiteReport {
    pub tool_version: String,
    pub suite: String,
    pub params: ReportParams,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// JSON with every timing field zeroed, for reproducibility comparisons.
    pub fn to_json_without_timing(&self) -> String {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.timing_ms = 0;
        }
        r.to_json()
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

type Job<'a> = (
    &'static str,
    Box<dyn Fn(&mut Rng) -> Result<CheckReport> + Send + Sync + 'a>,
);

fn job<'a>(
    name: &'static str,
    f: impl Fn(&mut Rng) -> Result<CheckReport> + Send + Sync + 'a,
) -> Job<'a> {
    (name, Box::new(f))
}

fn jobs_for<'a>(name: &str, frame: &'a BoseFrame, params: &SuiteParams) -> Result<Vec<Job<'a>>> {
    let (n, cap) = (params.samples, params.cap);
    let t = frame.tower();
    let q = t.q();
    let small = n.clamp(1, 10);
    Ok(match name {
        "fields" => vec![
            job("field_axioms", move |r| Ok(check_field_axioms(t, r, n))),
            job("frobenius_fixed_field", move |_| {
                Ok(check_frobenius_fixed_points(t))
            }),
            job("frame_identities", move |_| check_frame_identities(frame)),
        ],
        "spread" => vec![
            job("spread_partition", move |_| check_spread(frame, cap)),
            job("gamma_correspondence", move |r| {
                check_gamma_correspondence(frame, r, n)
            }),
            job("incidence", move |r| check_incidence(frame, r, n)),
            job("frame_identities", move |_| check_frame_identities(frame)),
        ],
        "subline" => vec![
            job("subline_regulus", move |r| {
                check_subline_reguli(frame, r, n)
            }),
            job("regulus_negative_controls", move |r| {
                check_regulus_negatives(t, r, 20)
            }),
        ],
        "subplane" => {
            let mut v = vec![
                job("subplane_segre", move |r| {
                    check_subplane_segre(frame, r, small)
                }),
                job("subplane_conjugacy", move |r| {
                    check_subplane_conjugacy(frame, r, small)
                }),
            ];
            if q <= 3 {
                v.push(job("segre_negative_control", move |_| {
                    check_segre_negative(frame)
                }));
            }
            if q == 2 {
                v.push(job("transversal_uniqueness", move |r| {
                    check_transversal_uniqueness(t, r, small)
                }));
            }
            v
        }
        "conic" => {
            let given = match &params.form {
                Some(text) => Some(HomogeneousForm::parse(t, Level::Cubic, 3, text)?),
                None => None,
            };
            let mut v = vec![
                job("conic_planes", move |r| {
                    check_conic_planes(frame, r, small, cap)
                }),
                job("curve_planes", move |r| {
                    check_curve_planes(frame, r, small, cap)
                }),
                job("conic_extension", move |r| {
                    check_conic_extension(frame, r, n * 20, small)
                }),
                job("expansion_linearity", move |r| {
                    check_expansion_linearity(t, r, n)
                }),
                job("degenerate_conic", move |_| {
                    let mut rep = CheckReport::new("degenerate_conic");
                    let d = HomogeneousForm::parse(t, Level::Cubic, 3, "x^2:1")?;
                    if conic_to_quadrics(t, &d) != Err(Error::DegenerateConic)
                        || is_nondegenerate_conic(t, &d)
                    {
                        rep.fail(json!({ "form": "x^2:1" }));
                    }
                    rep.set("checked", 1);
                    Ok(rep)
                }),
            ];
            if let Some(c) = given {
                v.push(job("given_conic", move |_| {
                    check_given_conic(frame, &c, cap)
                }));
            }
            v
        }
        "fqconic" => vec![
            job("fq_conic_variety", move |r| {
                check_fq_conic_variety(frame, r, small, cap)
            }),
            job("fq_conic_extension", move |r| {
                check_fq_conic_extension(frame, r, small, n * 20)
            }),
        ],
        "cone" => vec![
            job("cone", move |r| check_cone(frame, r, n, false)),
            job("cone_wrong_base", move |r| check_cone(frame, r, n, true)),
        ],
        "extension" => vec![
            job("bracket_planes", move |r| check_bracket_planes(frame, r, n)),
            job("sextic_bracket_planes", move |r| {
                check_sextic_bracket_planes(frame, r, small)
            }),
            job("subline_extension", move |r| {
                check_subline_extension(frame, r)
            }),
            job("t_planes", move |r| check_t_planes(frame, r, n)),
        ],
        "scroll" => vec![
            job("hyperbolic_scroll", move |_| {
                check_hyperbolic_scroll(t, cap)
            }),
            job("conic_scroll", move |_| check_conic_scroll(t, cap)),
            job("sigma_birational", move |_| check_sigma_birational(t, cap)),
            job("sigma_bijection", move |_| check_sigma_bijection(t, cap)),
            job("scroll_order", move |r| {
                let rep = scroll_order_dimension(t, r, n, cap)?;
                Ok(order_check(
                    "scroll_order",
                    &rep,
                    rep.max_hits <= 6,
                    "at most 6 hits",
                ))
            }),
            job("plane_order_control", move |r| {
                let rep = plane_order_control(t, r, n, cap)?;
                let ok = rep.max_hits == 1 && rep.modal_hits == 1 && rep.histogram["0"] == 0;
                Ok(order_check(
                    "plane_order_control",
                    &rep,
                    ok,
                    "exactly 1 hit",
                ))
            }),
            job("quadric_order_control", move |r| {
                let rep = quadric_order_control(t, r, n, cap)?;
                Ok(order_check(
                    "quadric_order_control",
                    &rep,
                    rep.max_hits <= 2,
                    "at most 2 hits",
                ))
            }),
        ],
        other => return Err(Error::UnknownSuite(other.to_string())),
    })
}

/// Run a named suite. Sub-checks run in parallel, each on the stream
/// split from the seed by its name; results are sorted by name.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteReport> {
    if !SUITES.contains(&name) {
        return Err(Error::UnknownSuite(name.to_string()));
    }
    let tower = params.tower()?;
    let frame = BoseFrame::new(tower);
    let root = Rng::new(params.seed);
    let jobs = jobs_for(name, &frame, params)?;
    let mut checks: Vec<CheckReport> = jobs
        .par_iter()
        .map(|(label, f)| {
            let start = Instant::now();
            let mut rng = root.split(label);
            f(&mut rng).map(|mut r| {
                r.name = label.to_string();
                r.pass = r.witness.is_none();
                r.timed(start)
            })
        })
        .collect::<Result<_>>()?;
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let t = frame.tower();
    Ok(SuiteReport {
        tool_version: TOOL_VERSION.to_string(),
        suite: name.to_string(),
        params: ReportParams {
            q: t.q(),
            p: t.p(),
            e: t.e(),
            modulus: t.modulus_string(),
            sextic_modulus: t.sextic_modulus_string(),
            seed: params.seed,
            samples: params.samples,
        },
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(q: u32) -> BoseFrame {
        BoseFrame::new(FieldTower::for_order(q).unwrap())
    }

    #[test]
    fn regulus_needs_three_planes() {
        let f = frame(2);
        let planes = &f.spread()[..2];
        assert_eq!(
            check_2regulus(f.tower(), planes),
            Err(Error::TooFewPlanes { needed: 3, got: 2 })
        );
    }

    #[test]
    fn planes_outside_a_five_space_are_rejected() {
        let f = frame(2);
        let t = f.tower();
        let pts = f.plane_points(Level::Cubic);
        // Three non-collinear points of PG(2,q³).
        let planes: Vec<Subspace> = [&pts[0], &pts[1], &pts[pts.len() - 1]]
            .iter()
            .map(|p| f.plane_of(p))
            .collect();
        let r = check_2regulus(t, &planes).unwrap();
        assert!(!r.pass);
        assert!(r.witness.is_some());
    }

    #[test]
    fn three_disjoint_planes_always_extend_to_a_regulus() {
        // Three pairwise disjoint planes of PG(5,q) lie on a unique regulus,
        // so the three-plane predicate cannot reject them.
        let t = FieldTower::for_order(3).unwrap();
        let mut rng = Rng::new(77);
        for _ in 0..10 {
            let planes = random_disjoint_planes(&t, &mut rng, 3);
            assert!(check_2regulus(&t, &planes).unwrap().pass);
        }
    }

    #[test]
    fn segre_needs_four_planes() {
        let f = frame(2);
        assert_eq!(
            check_segre_system(f.tower(), &f.spread()[..3]).unwrap_err(),
            Error::DegeneratePlanes
        );
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(
            run_suite("nosuch", &SuiteParams::new(2, 1, 5)).unwrap_err(),
            Error::UnknownSuite("nosuch".into())
        );
    }

    #[test]
    fn point_set_membership() {
        let t = FieldTower::for_order(3).unwrap();
        let plane = Subspace::coordinate(&t, Level::Base, 8, &[0, 4]);
        let pts = plane.enumerate_points(&t, DEFAULT_CAP).unwrap();
        let set = PointSet::new(3, 8, &pts);
        for p in Subspace::whole(Level::Base, 8)
            .enumerate_points(&t, DEFAULT_CAP)
            .unwrap()
        {
            assert_eq!(set.contains(p.coords()), plane.contains_point(&t, &p));
        }
    }
}
