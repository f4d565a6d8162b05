//! Substructures of PG(2,q³) and the configurations they produce in PG(8,q):
//! transversal planes, Segre varieties S₂;₂ through four planes, GF(q)-sublines
//! and subplanes with their conjugacy maps, GF(q)-conics, bracket planes, and
//! scrolls.

use std::collections::BTreeSet;

use crate::bose::BoseFrame;
use crate::error::{Error, Result};
use crate::fields::{FieldTower, Level};
use crate::forms::{is_nondegenerate_conic, HomogeneousForm, VarietyHandle};
use crate::projgeom::{
    apply_semilinear, random_point, span, Matrix, ProjPoint, Subspace, DEFAULT_CAP,
};
use crate::rng::Rng;

// ---------------------------------------------------------------------------
// transversal planes

/// The unique plane through `p` meeting each of the pairwise-disjoint
/// planes `alpha`, `beta`, `gamma` of PG(8).
pub fn unique_transversal_plane(
    tower: &FieldTower,
    p: &ProjPoint,
    alpha: &Subspace,
    beta: &Subspace,
    gamma: &Subspace,
) -> Result<Subspace> {
    if span(tower, &[alpha, beta, gamma])?.dim() != alpha.ambient_dim() as isize {
        return Err(Error::NotSpanning);
    }
    let pt = p.to_subspace();
    for (u, w) in [(alpha, beta), (alpha, gamma), (beta, gamma)] {
        if span(tower, &[u, w])?.contains_point(tower, p) {
            return Err(Error::PointOnTransversalLine);
        }
    }
    let s6 = span(tower, &[&pt, alpha, beta])?;
    let q = s6.meet(tower, gamma)?;
    let s4 = span(tower, &[&pt, &q, alpha])?;
    let r = s4.meet(tower, beta)?;
    span(tower, &[&pt, &q, &r])
}

// ---------------------------------------------------------------------------
// Segre varieties through four planes

/// The Segre variety S₂;₂ determined by four planes of PG(8), any three of
/// which span. In frame coordinates y = M⁻¹x, with Y[i][k] = y[3i + k], the
/// variety is {rank Y ≤ 1}: the points M(r ⊗ a).
#[derive(Clone, Debug)]
pub struct SegreSystem {
    /// Columns (a₀,a₁,a₂,b₀,b₁,b₂,c₀,c₁,c₂) from splitting δ over α ⊕ β ⊕ γ.
    pub frame: Matrix,
    pub frame_inv: Matrix,
    /// The system containing the four input planes: {M(r ⊗ a) : a}, one
    /// plane per r.
    pub planes: Vec<Subspace>,
    /// The opposite system {M(r ⊗ a) : r}, one plane per a; these are the
    /// transversal planes through the points of α.
    pub transversals: Vec<Subspace>,
    /// The nine 2×2 minors of Y, as quadrics in x.
    pub quadrics: Vec<HomogeneousForm>,
}

impl SegreSystem {
    pub fn contains_plane(&self, plane: &Subspace) -> bool {
        self.planes.binary_search(plane).is_ok()
    }

    pub fn variety(&self) -> VarietyHandle {
        let level = self.frame.level();
        VarietyHandle::new(level, 8, self.quadrics.clone()).expect("nine-variable quadrics")
    }

    /// Quadrics read over a larger field.
    pub fn quadrics_at(&self, level: Level) -> Vec<HomogeneousForm> {
        self.quadrics
            .iter()
            .map(|g| g.embed(level).expect("extension goes up"))
            .collect()
    }
}

/// The nine 2×2 minors of the 3×3 matrix of linear forms Y[i][k].
pub fn minor_quadrics(tower: &FieldTower, y: &[HomogeneousForm]) -> Vec<HomogeneousForm> {
    let mut out = Vec::with_capacity(9);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for (k, l) in [(0, 1), (0, 2), (1, 2)] {
            let a = y[3 * i + k].mul(tower, &y[3 * j + l]).expect("same arity");
            let b = y[3 * i + l].mul(tower, &y[3 * j + k]).expect("same arity");
            out.push(a.sub(tower, &b).expect("same degree"));
        }
    }
    out
}

pub fn segre_from_four_planes(
    tower: &FieldTower,
    alpha: &Subspace,
    beta: &Subspace,
    gamma: &Subspace,
    delta: &Subspace,
) -> Result<SegreSystem> {
    let quad = [alpha, beta, gamma, delta];
    let level = alpha.level();
    for s in quad {
        if s.dim() != 2 || s.ambient_dim() != 8 || s.level() != level {
            return Err(Error::DegeneratePlanes);
        }
    }
    for skip in 0..4 {
        let three: Vec<&Subspace> = (0..4).filter(|&i| i != skip).map(|i| quad[i]).collect();
        if span(tower, &three)?.dim() != 8 {
            return Err(Error::DegeneratePlanes);
        }
    }
    let f = tower.field(level);
    // Split each basis vector of δ over α ⊕ β ⊕ γ.
    let mut basis: Vec<Vec<u32>> = Vec::with_capacity(9);
    for s in [alpha, beta, gamma] {
        basis.extend(s.basis().iter().cloned());
    }
    let basis_m = Matrix::from_columns(level, &basis);
    let basis_inv = basis_m.inverse(tower)?;
    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); 9];
    for (i, d) in delta.basis().iter().enumerate() {
        let c = basis_inv.mul_vec(tower, d);
        for blk in 0..3 {
            let mut part = vec![0u32; 9];
            for k in 0..3 {
                let coeff = c[3 * blk + k];
                for (x, &b) in part.iter_mut().zip(&basis[3 * blk + k]) {
                    *x = f.add(*x, f.mul(coeff, b));
                }
            }
            cols[3 * blk + i] = part;
        }
    }
    let frame = Matrix::from_columns(level, &cols);
    let frame_inv = frame.inverse(tower).map_err(|_| Error::DegeneratePlanes)?;

    let y: Vec<HomogeneousForm> = frame_inv
        .rows()
        .iter()
        .map(|r| HomogeneousForm::linear(level, r))
        .collect();
    let quadrics = minor_quadrics(tower, &y);

    let pg2 = Subspace::whole(level, 2).enumerate_points(tower, DEFAULT_CAP)?;
    let image = |r: &[u32], a: &[u32]| -> Vec<u32> {
        let mut y = vec![0u32; 9];
        for i in 0..3 {
            for k in 0..3 {
                y[3 * i + k] = f.mul(r[i], a[k]);
            }
        }
        frame.mul_vec(tower, &y)
    };
    let unit = |k: usize| -> Vec<u32> {
        let mut v = vec![0; 3];
        v[k] = 1;
        v
    };
    let mut planes: Vec<Subspace> = pg2
        .iter()
        .map(|r| {
            let rows = (0..3).map(|k| image(r.coords(), &unit(k))).collect();
            Subspace::new(tower, level, 8, rows).expect("nine coordinates")
        })
        .collect();
    planes.sort();

    // Transversals through the points of α, built plane by plane.
    let transversals = pg2
        .iter()
        .map(|a| {
            let p = ProjPoint::new(tower, level, image(&unit(0), a.coords()))?;
            unique_transversal_plane(tower, &p, beta, gamma, delta)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SegreSystem {
        frame,
        frame_inv,
        planes,
        transversals,
        quadrics,
    })
}

// ---------------------------------------------------------------------------
// conjugacy maps

/// An order-3 semilinear collineation fixing a GF(q)-substructure pointwise.
pub trait Conjugacy {
    /// One application to a point of PG(2) at cubic or sextic level.
    fn apply(&self, tower: &FieldTower, x: &ProjPoint) -> Result<ProjPoint>;

    fn apply_power(&self, tower: &FieldTower, x: &ProjPoint, k: u32) -> Result<ProjPoint> {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.apply(tower, &y)?;
        }
        Ok(y)
    }

    /// The GF(q)-points fixed by the map.
    fn points(&self) -> &[ProjPoint];
}

/// A GF(q)-subline of a line of PG(2,q³).
#[derive(Clone, Debug)]
pub struct SublineFrame {
    /// The line of PG(2,q³) carrying the subline.
    pub line: Subspace,
    /// Line coordinates of the subline are F·PG(1,q).
    pub f: Matrix,
    /// D = F·(F^σ)⁻¹; the conjugacy map is u ↦ D·u^q in line coordinates.
    pub d: Matrix,
    pub points: Vec<ProjPoint>,
}

impl SublineFrame {
    fn to_plane(&self, tower: &FieldTower, level: Level, u: &[u32]) -> Result<ProjPoint> {
        let f = tower.field(level);
        let mut v = vec![0u32; 3];
        for (c, row) in u.iter().zip(self.line.basis()) {
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(*c, r));
            }
        }
        ProjPoint::new(tower, level, v)
    }
}

impl Conjugacy for SublineFrame {
    fn apply(&self, tower: &FieldTower, x: &ProjPoint) -> Result<ProjPoint> {
        let level = x.level();
        let u = self
            .line
            .embed(level)
            .coords_of(tower, x.coords())
            .ok_or(Error::NotCollinear)?;
        let f = tower.field(level);
        let uq: Vec<u32> = u.iter().map(|&c| f.frob(c, 1)).collect();
        let w = self.d.embed(level).mul_vec(tower, &uq);
        self.to_plane(tower, level, &w)
    }

    fn points(&self) -> &[ProjPoint] {
        &self.points
    }
}

/// The GF(q)-subline through three distinct collinear points of PG(2,q³).
pub fn subline_through(
    tower: &FieldTower,
    p1: &ProjPoint,
    p2: &ProjPoint,
    p3: &ProjPoint,
) -> Result<SublineFrame> {
    if p1 == p2 || p1 == p3 || p2 == p3 {
        return Err(Error::NotDistinct);
    }
    let line = Subspace::from_points(tower, &[p1.clone(), p2.clone()])?;
    if !line.contains_point(tower, p3) {
        return Err(Error::NotCollinear);
    }
    let level = line.level();
    let f = tower.field(level);
    let c: Vec<Vec<u32>> = [p1, p2, p3]
        .iter()
        .map(|p| line.coords_of(tower, p.coords()).expect("on the line"))
        .collect();
    // λc₁ + μc₂ = c₃
    let m = Matrix::from_columns(level, &[c[0].clone(), c[1].clone()]);
    let lm = m.inverse(tower)?.mul_vec(tower, &c[2]);
    let cols: Vec<Vec<u32>> = (0..2)
        .map(|j| c[j].iter().map(|&x| f.mul(lm[j], x)).collect())
        .collect();
    let fm = Matrix::from_columns(level, &cols);
    let d = fm.mul(tower, &fm.frobenius(tower, 1).inverse(tower)?);
    let mut frame = SublineFrame {
        line,
        f: fm,
        d,
        points: Vec::new(),
    };
    let mut points: Vec<ProjPoint> = Subspace::whole(Level::Base, 1)
        .enumerate_points(tower, DEFAULT_CAP)?
        .iter()
        .map(|v| frame.to_plane(tower, level, &frame.f.mul_vec(tower, v.coords())))
        .collect::<Result<_>>()?;
    points.sort();
    frame.points = points;
    Ok(frame)
}

/// A GF(q)-subplane π = A⁻¹·PG(2,q) of PG(2,q³).
#[derive(Clone, Debug)]
pub struct SubplaneFrame {
    pub a: Matrix,
    pub a_inv: Matrix,
    /// B = A⁻¹A^σ; the conjugacy map is X ↦ B·X^q.
    pub b: Matrix,
    pub points: Vec<ProjPoint>,
}

impl Conjugacy for SubplaneFrame {
    fn apply(&self, tower: &FieldTower, x: &ProjPoint) -> Result<ProjPoint> {
        apply_semilinear(tower, &self.b.embed(x.level()), 1, x)
    }

    fn points(&self) -> &[ProjPoint] {
        &self.points
    }
}

impl SubplaneFrame {
    pub fn contains(&self, p: &ProjPoint) -> bool {
        p.level() == Level::Cubic && self.points.binary_search(p).is_ok()
    }

    /// Coordinates A·X of a point in the standard frame.
    pub fn frame_coords(&self, tower: &FieldTower, p: &ProjPoint) -> ProjPoint {
        let v = self.a.embed(p.level()).mul_vec(tower, p.coords());
        ProjPoint::new(tower, p.level(), v).expect("A is nonsingular")
    }
}

fn collinear(tower: &FieldTower, pts: &[&ProjPoint]) -> bool {
    let owned: Vec<ProjPoint> = pts.iter().map(|&p| p.clone()).collect();
    Subspace::from_points(tower, &owned).map_or(true, |s| s.dim() <= 1)
}

/// The GF(q)-subplane through a quadrangle of PG(2,q³).
pub fn subplane_through(tower: &FieldTower, quad: &[ProjPoint; 4]) -> Result<SubplaneFrame> {
    for skip in 0..4 {
        let three: Vec<&ProjPoint> = (0..4).filter(|&i| i != skip).map(|i| &quad[i]).collect();
        if collinear(tower, &three) {
            return Err(Error::DegenerateQuadrangle);
        }
    }
    let level = quad[0].level();
    let f = tower.field(level);
    let m = Matrix::from_columns(
        level,
        &[
            quad[0].coords().to_vec(),
            quad[1].coords().to_vec(),
            quad[2].coords().to_vec(),
        ],
    );
    let lambda = m.inverse(tower)?.mul_vec(tower, quad[3].coords());
    let cols: Vec<Vec<u32>> = (0..3)
        .map(|j| {
            quad[j]
                .coords()
                .iter()
                .map(|&x| f.mul(lambda[j], x))
                .collect()
        })
        .collect();
    let a_inv = Matrix::from_columns(level, &cols);
    let a = a_inv.inverse(tower)?;
    let b = a_inv.mul(tower, &a.frobenius(tower, 1));
    let mut points: Vec<ProjPoint> = Subspace::whole(Level::Base, 2)
        .enumerate_points(tower, DEFAULT_CAP)?
        .iter()
        .map(|v| ProjPoint::new(tower, level, a_inv.mul_vec(tower, v.coords())))
        .collect::<Result<_>>()?;
    points.sort();
    Ok(SubplaneFrame {
        a,
        a_inv,
        b,
        points,
    })
}

/// Three distinct collinear points of PG(2,q³) drawn at random.
pub fn random_collinear_triple(tower: &FieldTower, rng: &mut Rng) -> [ProjPoint; 3] {
    let a = random_point(tower, Level::Cubic, 2, rng);
    let mut b = random_point(tower, Level::Cubic, 2, rng);
    while b == a {
        b = random_point(tower, Level::Cubic, 2, rng);
    }
    let line = Subspace::from_points(tower, &[a.clone(), b.clone()]).expect("distinct");
    let f = tower.field(Level::Cubic);
    loop {
        let s = rng.below(f.size());
        let t = rng.below(f.size());
        let v: Vec<u32> = line.basis()[0]
            .iter()
            .zip(&line.basis()[1])
            .map(|(&x, &y)| f.add(f.mul(s, x), f.mul(t, y)))
            .collect();
        if let Ok(c) = ProjPoint::new(tower, Level::Cubic, v) {
            if c != a && c != b {
                return [a, b, c];
            }
        }
    }
}

/// A quadrangle of PG(2,q³) in general position drawn at random.
pub fn random_quadrangle(tower: &FieldTower, rng: &mut Rng) -> [ProjPoint; 4] {
    loop {
        let quad: [ProjPoint; 4] =
            std::array::from_fn(|_| random_point(tower, Level::Cubic, 2, rng));
        let ok = (0..4).all(|skip| {
            let three: Vec<&ProjPoint> = (0..4).filter(|&i| i != skip).map(|i| &quad[i]).collect();
            !collinear(tower, &three)
        });
        if ok {
            return quad;
        }
    }
}

// ---------------------------------------------------------------------------
// GF(q)-conics

#[derive(Clone, Debug)]
pub struct FqConic {
    /// The q + 1 points of the conic inside the subplane.
    pub points: Vec<ProjPoint>,
    /// The conic form composed with A, over GF(q³).
    pub cplus: HomogeneousForm,
}

/// The GF(q)-conic of a subplane given by a conic `c` over GF(q) in frame
/// coordinates. The GF(q³)-conic containing it is defined by transporting
/// the form, never by interpolation.
pub fn fq_conic(tower: &FieldTower, frame: &SubplaneFrame, c: &HomogeneousForm) -> Result<FqConic> {
    if c.nvars() != 3
        || c.degree() != 2
        || c.level() != Level::Base
        || !is_nondegenerate_conic(tower, c)
    {
        return Err(Error::DegenerateConic);
    }
    let base_pts = VarietyHandle::new(Level::Base, 2, vec![c.clone()])?.points(
        tower,
        &Subspace::whole(Level::Base, 2),
        DEFAULT_CAP,
    )?;
    let mut points: Vec<ProjPoint> = base_pts
        .iter()
        .map(|p| ProjPoint::new(tower, Level::Cubic, frame.a_inv.mul_vec(tower, p.coords())))
        .collect::<Result<_>>()?;
    points.sort();
    let subs: Vec<HomogeneousForm> = frame
        .a
        .rows()
        .iter()
        .map(|r| HomogeneousForm::linear(Level::Cubic, r))
        .collect();
    let cplus = c.compose(tower, &subs)?;
    let on_both: Vec<&ProjPoint> = frame
        .points
        .iter()
        .filter(|p| cplus.eval_point(tower, p) == 0)
        .collect();
    debug_assert_eq!(on_both.len(), points.len());
    Ok(FqConic { points, cplus })
}

// ---------------------------------------------------------------------------
// bracket planes

/// ⟨X, Γ(c⁻¹x̄)^q, Γ(c⁻²x̄)^{q²}⟩ for X = Γ(x̄) on Γ (cubic level) or its
/// sextic extension. Over GF(q³) the map c has order 3, over GF(q⁶) order 6.
pub fn bracket_plane(
    tower: &FieldTower,
    conj: &dyn Conjugacy,
    frame: &BoseFrame,
    x: &ProjPoint,
) -> Result<Subspace> {
    let bar = frame.bar_of_gamma(x)?;
    let (k1, k2) = match x.level() {
        Level::Cubic => (2, 1),
        Level::Sextic => (5, 4),
        Level::Base => return Err(Error::NotOnGamma),
    };
    let y = frame
        .gamma_point(&conj.apply_power(tower, &bar, k1)?)
        .frobenius(tower, 1);
    let z = frame
        .gamma_point(&conj.apply_power(tower, &bar, k2)?)
        .frobenius(tower, 2);
    Subspace::from_points(tower, &[x.clone(), y, z])
}

// ---------------------------------------------------------------------------
// scrolls

/// A base variety given by a polynomial map from PG(k) into a subspace.
/// The map's forms give coordinates in the subspace's echelon basis.
#[derive(Clone, Debug)]
pub struct ParametrizedBase {
    pub subspace: Subspace,
    pub map: Vec<HomogeneousForm>,
}

impl ParametrizedBase {
    pub fn param_arity(&self) -> usize {
        self.map.first().map_or(0, HomogeneousForm::nvars)
    }

    /// Image of a parameter vector; None when every coordinate vanishes.
    pub fn point(&self, tower: &FieldTower, param: &[u32]) -> Option<ProjPoint> {
        let level = self.subspace.level();
        let f = tower.field(level);
        let cs: Vec<u32> = self
            .map
            .iter()
            .map(|g| g.eval(tower, level, param))
            .collect();
        let mut v = vec![0u32; self.subspace.ambient_dim() + 1];
        for (c, row) in cs.iter().zip(self.subspace.basis()) {
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(*c, r));
            }
        }
        ProjPoint::new(tower, level, v).ok()
    }
}

#[derive(Clone, Debug)]
pub struct Scroll {
    pub bases: Vec<ParametrizedBase>,
    /// Parameter-space homographies for bases 1..=r.
    pub homographies: Vec<Matrix>,
    /// Parameter points, in enumeration order.
    pub params: Vec<ProjPoint>,
    /// Π_P for each parameter point.
    pub generators: Vec<Subspace>,
}

impl Scroll {
    /// Type parameter r: the generators are r-spaces.
    pub fn r(&self) -> usize {
        self.bases.len() - 1
    }

    /// All points on some generator, sorted.
    pub fn points(&self, tower: &FieldTower, cap: u64) -> Result<Vec<ProjPoint>> {
        let mut set = BTreeSet::new();
        for g in &self.generators {
            for p in g.enumerate_points(tower, cap)? {
                set.insert(p);
            }
        }
        Ok(set.into_iter().collect())
    }
}

/// Build the scroll joining corresponding points of the bases. Homographies
/// default to the identity.
pub fn scroll_build(
    tower: &FieldTower,
    bases: Vec<ParametrizedBase>,
    homographies: Option<Vec<Matrix>>,
) -> Result<Scroll> {
    let first = bases
        .first()
        .ok_or_else(|| Error::ArityMismatch("a scroll needs at least one base".into()))?;
    let level = first.subspace.level();
    let n = first.subspace.ambient_dim();
    let k = first.param_arity();
    for b in &bases {
        if b.subspace.ambient_dim() != n || b.subspace.level() != level {
            return Err(Error::ArityMismatch(
                "bases live in different spaces".into(),
            ));
        }
        if b.param_arity() != k {
            return Err(Error::ArityMismatch(
                "bases have different parameter spaces".into(),
            ));
        }
        if b.map.len() != b.subspace.basis().len() {
            return Err(Error::ArityMismatch(
                "map length differs from base dimension + 1".into(),
            ));
        }
    }
    let joined = span(
        tower,
        &bases.iter().map(|b| &b.subspace).collect::<Vec<_>>(),
    )?;
    let total: usize = bases.iter().map(|b| b.subspace.basis().len()).sum();
    if joined.basis().len() != total {
        return Err(Error::DependentSubspaces);
    }
    let r = bases.len() - 1;
    let homographies = homographies.unwrap_or_else(|| vec![Matrix::identity(level, k); r]);
    if homographies.len() != r
        || homographies
            .iter()
            .any(|h| h.nrows() != k || h.ncols() != k)
    {
        return Err(Error::ArityMismatch(format!(
            "expected {r} homographies of size {k}"
        )));
    }
    let params = Subspace::whole(level, k - 1).enumerate_points(tower, DEFAULT_CAP)?;
    let mut generators = Vec::with_capacity(params.len());
    let mut kept = Vec::with_capacity(params.len());
    for t in &params {
        let mut pts = Vec::with_capacity(bases.len());
        let mut ok = true;
        for (i, b) in bases.iter().enumerate() {
            let param = if i == 0 {
                t.coords().to_vec()
            } else {
                homographies[i - 1].mul_vec(tower, t.coords())
            };
            match b.point(tower, &param) {
                Some(p) => pts.push(p),
                None => ok = false,
            }
        }
        if ok {
            generators.push(Subspace::from_points(tower, &pts)?);
            kept.push(t.clone());
        }
    }
    Ok(Scroll {
        bases,
        homographies,
        params: kept,
        generators,
    })
}

fn conic_map(level: Level) -> Vec<HomogeneousForm> {
    // (s, t) ↦ (s², st, t²)
    [[2, 0], [1, 1], [0, 2]]
        .iter()
        .map(|e| HomogeneousForm::monomial(level, e.to_vec(), 1))
        .collect()
}

/// The scroll in PG(8) joining the conics (s², st, t²) in the three
/// coordinate planes ⟨e₀,e₁,e₂⟩, ⟨e₃,e₄,e₅⟩, ⟨e₆,e₇,e₈⟩.
pub fn canonical_conic_scroll(tower: &FieldTower, level: Level) -> Result<Scroll> {
    let bases = (0..3)
        .map(|blk| ParametrizedBase {
            subspace: Subspace::coordinate(tower, level, 8, &[3 * blk, 3 * blk + 1, 3 * blk + 2]),
            map: conic_map(level),
        })
        .collect();
    scroll_build(tower, bases, None)
}

/// Equations of the canonical conic scroll: the nine 2×2 minors of Y and
/// Y[i][0]·Y[i][2] − Y[i][1]² for each row.
pub fn canonical_conic_scroll_variety(tower: &FieldTower, level: Level) -> VarietyHandle {
    let y: Vec<HomogeneousForm> = (0..9)
        .map(|i| {
            let mut c = vec![0; 9];
            c[i] = 1;
            HomogeneousForm::linear(level, &c)
        })
        .collect();
    let mut forms = minor_quadrics(tower, &y);
    for i in 0..3 {
        let a = y[3 * i].mul(tower, &y[3 * i + 2]).expect("arity");
        let b = y[3 * i + 1].mul(tower, &y[3 * i + 1]).expect("arity");
        forms.push(a.sub(tower, &b).expect("degree"));
    }
    VarietyHandle::new(level, 8, forms).expect("nine variables")
}

/// The scroll of two lines ⟨e₀,e₁⟩ and ⟨e₂,e₃⟩ of PG(3) joined by the
/// identity: the hyperbolic quadric x₀x₃ = x₁x₂.
pub fn two_line_scroll(tower: &FieldTower, level: Level) -> Result<Scroll> {
    let id = vec![
        HomogeneousForm::linear(level, &[1, 0]),
        HomogeneousForm::linear(level, &[0, 1]),
    ];
    let bases = vec![
        ParametrizedBase {
            subspace: Subspace::coordinate(tower, level, 3, &[0, 1]),
            map: id.clone(),
        },
        ParametrizedBase {
            subspace: Subspace::coordinate(tower, level, 3, &[2, 3]),
            map: id,
        },
    ];
    scroll_build(tower, bases, None)
}

/// (y₀³, y₀²y₁, y₀y₁², y₀²y₂, y₀y₁y₂, y₁²y₂, y₀²y₃, y₀y₁y₃, y₁²y₃).
pub fn sigma_parametrization(tower: &FieldTower, level: Level, y: &[u32; 4]) -> Result<ProjPoint> {
    let f = tower.field(level);
    let [y0, y1, y2, y3] = *y;
    let conic = [f.mul(y0, y0), f.mul(y0, y1), f.mul(y1, y1)];
    let mut v = Vec::with_capacity(9);
    for w in [y0, y2, y3] {
        v.extend(conic.iter().map(|&c| f.mul(w, c)));
    }
    ProjPoint::new(tower, level, v).map_err(|_| Error::KernelPoint)
}
