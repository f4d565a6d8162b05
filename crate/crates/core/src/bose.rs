//! The Bose representation of PG(2,q³) as a regular 2-spread of PG(8,q).
//!
//! A point (x, y, z) of PG(2,q³) becomes the plane of PG(8,q) spanned by the
//! coordinate vectors of ρ·(x, y, z), ρ ∈ {1, τ, τ²}, where an element of
//! GF(q³) contributes its three coefficients in the basis {1, τ, τ²}.
//!
//! The extensions of all spread planes meet the transversal plane
//! Γ = ⟨A₀, A₁, A₂⟩ of PG(8,q³) and its two conjugates. The frame constants
//! are a₀ = t₁ + t₂τ − τ², a₁ = t₂ − τ, a₂ = −1, and (x, y, z) corresponds
//! to the point xA₀ + yA₁ + zA₂ of Γ.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldTower, Level};
use crate::projgeom::{ProjPoint, Subspace, DEFAULT_CAP};

#[derive(Debug)]
pub struct BoseFrame {
    tower: FieldTower,
    consts: [u32; 3],
    a_points: [ProjPoint; 3],
    transversals: [Subspace; 3],
    spread: OnceLock<Vec<Subspace>>,
}

/// A point of PG(2,q³) with its Γ-image and its spread plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanePointPair {
    pub bar_x: ProjPoint,
    pub gamma_x: ProjPoint,
    pub plane: Subspace,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpreadReport {
    pub q: u32,
    pub modulus: String,
    pub plane_count: u64,
    pub points_covered: u64,
    pub multiplicity_histogram: BTreeMap<u32, u64>,
    pub regular: bool,
    pub pass: bool,
}

impl Clone for BoseFrame {
    fn clone(&self) -> Self {
        BoseFrame::new(self.tower.clone())
    }
}

impl BoseFrame {
    pub fn new(tower: FieldTower) -> Self {
        let f = tower.field(Level::Cubic);
        let [_, t1, t2] = tower.cubic_modulus();
        let tau = tower.tau().raw();
        let tau2 = f.mul(tau, tau);
        let a0 = f.sub(f.add(t1, f.mul(t2, tau)), tau2);
        let a1 = f.sub(t2, tau);
        let a2 = f.neg(1);
        let consts = [a0, a1, a2];
        let a_points: [ProjPoint; 3] = std::array::from_fn(|blk| {
            let mut v = vec![0u32; 9];
            v[3 * blk..3 * blk + 3].copy_from_slice(&consts);
            ProjPoint::new(&tower, Level::Cubic, v).expect("a₂ ≠ 0")
        });
        let gamma = Subspace::from_points(&tower, &a_points).expect("same ambient");
        let transversals = [
            gamma.clone(),
            gamma.frobenius(&tower, 1),
            gamma.frobenius(&tower, 2),
        ];
        BoseFrame {
            tower,
            consts,
            a_points,
            transversals,
            spread: OnceLock::new(),
        }
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    /// The constants (a₀, a₁, a₂) as cubic-level raws.
    pub fn constants(&self) -> [u32; 3] {
        self.consts
    }

    pub fn a_points(&self) -> &[ProjPoint; 3] {
        &self.a_points
    }

    /// Γ, Γ^q, Γ^{q²} over GF(q³).
    pub fn transversals(&self) -> &[Subspace; 3] {
        &self.transversals
    }

    pub fn gamma(&self) -> &Subspace {
        &self.transversals[0]
    }

    /// xA₀ + yA₁ + zA₂ at the level of `bar_x` (cubic or sextic).
    pub fn gamma_point(&self, bar_x: &ProjPoint) -> ProjPoint {
        assert_eq!(bar_x.ambient_dim(), 2, "expected a point of PG(2)");
        assert!(bar_x.level() >= Level::Cubic, "Γ lives over GF(q³)");
        let f = self.tower.field(bar_x.level());
        let mut v = vec![0u32; 9];
        for (blk, &c) in bar_x.coords().iter().enumerate() {
            for (k, &a) in self.consts.iter().enumerate() {
                v[3 * blk + k] = f.mul(c, a);
            }
        }
        ProjPoint::new(&self.tower, bar_x.level(), v).expect("nonzero")
    }

    /// Inverse of `gamma_point` on Γ (or its sextic extension).
    pub fn bar_of_gamma(&self, x: &ProjPoint) -> Result<ProjPoint> {
        if x.ambient_dim() != 8 || x.level() < Level::Cubic {
            return Err(Error::NotOnGamma);
        }
        let bar = ProjPoint::new(
            &self.tower,
            x.level(),
            vec![x.coords()[0], x.coords()[3], x.coords()[6]],
        )
        .map_err(|_| Error::NotOnGamma)?;
        if self.gamma_point(&bar) == *x {
            Ok(bar)
        } else {
            Err(Error::NotOnGamma)
        }
    }

    /// Coefficient vector in GF(q)⁹ of a vector of GF(q³)³.
    pub fn flatten(&self, v: &[u32]) -> Vec<u32> {
        let q = self.tower.q();
        v.iter()
            .flat_map(|&c| [c % q, (c / q) % q, c / (q * q)])
            .collect()
    }

    /// The spread plane of a cubic-level point of PG(2,q³).
    pub fn plane_of(&self, bar_x: &ProjPoint) -> Subspace {
        assert_eq!(bar_x.level(), Level::Cubic);
        let f = self.tower.field(Level::Cubic);
        let tau = self.tower.tau().raw();
        let mut rho = 1;
        let mut rows = Vec::with_capacity(3);
        for _ in 0..3 {
            let scaled: Vec<u32> = bar_x.coords().iter().map(|&c| f.mul(rho, c)).collect();
            rows.push(self.flatten(&scaled));
            rho = f.mul(rho, tau);
        }
        Subspace::new(&self.tower, Level::Base, 8, rows).expect("nine coordinates")
    }

    pub fn bose_plane(&self, bar_x: &ProjPoint) -> PlanePointPair {
        PlanePointPair {
            bar_x: bar_x.clone(),
            gamma_x: self.gamma_point(bar_x),
            plane: self.plane_of(bar_x),
        }
    }

    /// The plane ⟨X, X^q, X^{q²}⟩ ∩ PG(8,q) for a point X of PG(8,q³).
    pub fn rational_plane_through(&self, x: &ProjPoint) -> Subspace {
        let t = &self.tower;
        let conj = [x.clone(), x.frobenius(t, 1), x.frobenius(t, 2)];
        Subspace::from_points(t, &conj)
            .expect("same ambient")
            .rational_points(t, Level::Base)
    }

    /// The 5-space of PG(8,q) representing a line of PG(2,q³).
    pub fn bose_line(&self, line: &Subspace) -> Result<Subspace> {
        if line.dim() != 1 || line.ambient_dim() != 2 || line.level() != Level::Cubic {
            return Err(Error::NotALine(line.dim()));
        }
        let t = &self.tower;
        let images: Vec<ProjPoint> = line
            .basis_points()
            .iter()
            .map(|p| self.gamma_point(p))
            .collect();
        let l_gamma = Subspace::from_points(t, &images)?;
        let all = crate::projgeom::span(
            t,
            &[&l_gamma, &l_gamma.frobenius(t, 1), &l_gamma.frobenius(t, 2)],
        )?;
        Ok(all.rational_points(t, Level::Base))
    }

    /// All points of PG(2, level), sorted.
    pub fn plane_points(&self, level: Level) -> Vec<ProjPoint> {
        Subspace::whole(level, 2)
            .enumerate_points(&self.tower, DEFAULT_CAP)
            .expect("PG(2) is small")
    }

    /// The q⁶ + q³ + 1 spread planes, ordered like the points of PG(2,q³).
    pub fn spread(&self) -> &[Subspace] {
        self.spread.get_or_init(|| {
            use rayon::prelude::*;
            self.plane_points(Level::Cubic)
                .par_iter()
                .map(|p| self.plane_of(p))
                .collect()
        })
    }

    pub fn verify_spread(&self, cap: u64) -> Result<SpreadReport> {
        use rayon::prelude::*;
        let t = &self.tower;
        let q = t.q() as u64;
        let total = Subspace::whole(Level::Base, 8).point_count(t);
        if total > cap as u128 {
            return Err(Error::TooLarge { count: total, cap });
        }
        let spread = self.spread();
        let index = |v: &[u32]| v.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64) as usize;
        let mut hits = vec![0u32; (q as usize).pow(9)];
        for plane in spread {
            plane.for_each_point(t, cap, |v| hits[index(v)] += 1)?;
        }
        let mut histogram = BTreeMap::new();
        Subspace::whole(Level::Base, 8).for_each_point(t, cap, |v| {
            *histogram.entry(hits[index(v)]).or_insert(0u64) += 1;
        })?;
        let points_covered = histogram
            .iter()
            .filter(|(&m, _)| m > 0)
            .map(|(_, &c)| c)
            .sum();

        let from_gamma: BTreeSet<Subspace> = self
            .gamma()
            .enumerate_points(t, cap)?
            .par_iter()
            .map(|x| self.rational_plane_through(x))
            .collect();
        let direct: BTreeSet<Subspace> = spread.iter().cloned().collect();
        let regular = from_gamma == direct;
        let pass = regular
            && histogram.len() == 1
            && histogram.contains_key(&1)
            && spread.len() as u64 == q.pow(6) + q.pow(3) + 1;
        Ok(SpreadReport {
            q: t.q(),
            modulus: t.modulus_string(),
            plane_count: spread.len() as u64,
            points_covered,
            multiplicity_histogram: histogram,
            regular,
            pass,
        })
    }

    /// Affine Bruck-Bose image (x₀,x₁,x₂, y₀,y₁,y₂, 1,0,0) of (x, y, 1).
    pub fn bruck_bose_coords(&self, bar_p: &ProjPoint) -> Result<ProjPoint> {
        let f = self.tower.field(Level::Cubic);
        let c = bar_p.coords();
        if c[2] == 0 {
            return Err(Error::PointAtInfinity);
        }
        let zi = f.inv(c[2]);
        let v = self.flatten(&[f.mul(c[0], zi), f.mul(c[1], zi), 1]);
        ProjPoint::new(&self.tower, Level::Base, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::random_point;
    use crate::rng::Rng;

    fn frame(q: u32) -> BoseFrame {
        BoseFrame::new(FieldTower::for_order(q).unwrap())
    }

    fn pt(f: &BoseFrame, level: Level, v: &[u32]) -> ProjPoint {
        ProjPoint::new(f.tower(), level, v.to_vec()).unwrap()
    }

    #[test]
    fn frame_constants_match_conjugate_products() {
        for q in [2, 3, 4, 5] {
            let fr = frame(q);
            let t = fr.tower();
            let f = t.field(Level::Cubic);
            let tau = t.tau().raw();
            let tq = f.frob(tau, 1);
            let tqq = f.frob(tau, 2);
            let [a0, a1, a2] = fr.constants();
            assert_eq!(a0, f.neg(f.mul(tq, tqq)), "q = {q}");
            assert_eq!(a1, f.add(tq, tqq), "q = {q}");
            assert_eq!(a2, f.neg(1));
        }
    }

    #[test]
    fn transversals_are_disjoint_and_span() {
        for q in [2, 3] {
            let fr = frame(q);
            let t = fr.tower();
            let [g0, g1, g2] = fr.transversals();
            assert!(g0.meet(t, g1).unwrap().is_empty());
            assert!(g1.meet(t, g2).unwrap().is_empty());
            assert!(g0.join(t, g1).unwrap().meet(t, g2).unwrap().is_empty());
            assert_eq!(crate::projgeom::span(t, &[g0, g1, g2]).unwrap().dim(), 8);
            assert!(g0.rational_points(t, Level::Base).is_empty());
        }
    }

    #[test]
    fn unit_points_give_coordinate_planes() {
        let fr = frame(2);
        let t = fr.tower();
        let p = fr.bose_plane(&pt(&fr, Level::Cubic, &[1, 0, 0]));
        assert_eq!(p.plane, Subspace::coordinate(t, Level::Base, 8, &[0, 1, 2]));
        let p = fr.bose_plane(&pt(&fr, Level::Cubic, &[0, 1, 0]));
        assert_eq!(p.plane, Subspace::coordinate(t, Level::Base, 8, &[3, 4, 5]));
        assert_eq!(p.plane.enumerate_points(t, DEFAULT_CAP).unwrap().len(), 7);
    }

    #[test]
    fn spread_planes_meet_gamma_in_their_gamma_point() {
        let fr = frame(2);
        let t = fr.tower();
        for bar in fr.plane_points(Level::Cubic) {
            let pair = fr.bose_plane(&bar);
            let meet = pair.plane.embed(Level::Cubic).meet(t, fr.gamma()).unwrap();
            assert_eq!(meet, pair.gamma_x.to_subspace());
            assert_eq!(fr.rational_plane_through(&pair.gamma_x), pair.plane);
            assert_eq!(
                crate::projgeom::rational_span_by_trace(t, &pair.gamma_x),
                pair.plane
            );
            assert_eq!(fr.bar_of_gamma(&pair.gamma_x).unwrap(), bar);
        }
    }

    #[test]
    fn bose_line_of_line_at_infinity() {
        let fr = frame(2);
        let t = fr.tower();
        let line = Subspace::coordinate(t, Level::Cubic, 2, &[0, 1]);
        let five = fr.bose_line(&line).unwrap();
        assert_eq!(
            five,
            Subspace::coordinate(t, Level::Base, 8, &[0, 1, 2, 3, 4, 5])
        );
        let inside = fr.spread().iter().filter(|s| five.contains(t, s)).count();
        assert_eq!(inside, 9);
        assert_eq!(
            fr.bose_line(&Subspace::whole(Level::Cubic, 2)),
            Err(Error::NotALine(2))
        );
    }

    #[test]
    fn collinearity_matches_common_five_space() {
        let fr = frame(2);
        let t = fr.tower();
        let mut rng = Rng::new(11);
        for i in 0..100 {
            let a = random_point(t, Level::Cubic, 2, &mut rng);
            let b = random_point(t, Level::Cubic, 2, &mut rng);
            // Half the triples are forced collinear.
            let c = if i % 2 == 0 {
                let line = Subspace::from_points(t, &[a.clone(), b.clone()]).unwrap();
                let pts = line.enumerate_points(t, DEFAULT_CAP).unwrap();
                pts[rng.below(pts.len() as u32) as usize].clone()
            } else {
                random_point(t, Level::Cubic, 2, &mut rng)
            };
            let collinear = Subspace::from_points(t, &[a.clone(), b.clone(), c.clone()])
                .unwrap()
                .dim()
                <= 1;
            let planes = [fr.plane_of(&a), fr.plane_of(&b), fr.plane_of(&c)];
            let joined = crate::projgeom::span(t, &[&planes[0], &planes[1], &planes[2]]).unwrap();
            assert_eq!(collinear, joined.dim() <= 5);
        }
    }

    #[test]
    fn bose_line_contains_planes_of_its_points() {
        let fr = frame(2);
        let t = fr.tower();
        let mut rng = Rng::new(3);
        for _ in 0..25 {
            let a = random_point(t, Level::Cubic, 2, &mut rng);
            let mut b = random_point(t, Level::Cubic, 2, &mut rng);
            while b == a {
                b = random_point(t, Level::Cubic, 2, &mut rng);
            }
            let line = Subspace::from_points(t, &[a, b]).unwrap();
            let five = fr.bose_line(&line).unwrap();
            assert_eq!(five.dim(), 5);
            let pts = line.enumerate_points(t, DEFAULT_CAP).unwrap();
            assert!(pts.iter().all(|p| five.contains(t, &fr.plane_of(p))));
            let inside = fr.spread().iter().filter(|s| five.contains(t, s)).count();
            assert_eq!(inside, 9);
        }
    }

    #[test]
    fn spread_q2() {
        let r = frame(2).verify_spread(DEFAULT_CAP).unwrap();
        assert_eq!(r.plane_count, 73);
        assert_eq!(r.points_covered, 511);
        assert_eq!(r.multiplicity_histogram, BTreeMap::from([(1, 511)]));
        assert!(r.regular && r.pass);
    }

    #[test]
    fn bruck_bose_slice() {
        let fr = frame(2);
        let t = fr.tower();
        let origin = fr
            .bruck_bose_coords(&pt(&fr, Level::Cubic, &[0, 0, 1]))
            .unwrap();
        assert_eq!(origin.coords(), &[0, 0, 0, 0, 0, 0, 1, 0, 0]);
        let tau = t.tau().raw();
        let bar = pt(&fr, Level::Cubic, &[tau, 1, 1]);
        let img = fr.bruck_bose_coords(&bar).unwrap();
        assert_eq!(img.coords(), &[0, 1, 0, 1, 0, 0, 1, 0, 0]);
        assert!(fr.plane_of(&bar).contains_point(t, &img));
        assert_eq!(
            fr.bruck_bose_coords(&pt(&fr, Level::Cubic, &[1, 0, 0])),
            Err(Error::PointAtInfinity)
        );
    }
}
