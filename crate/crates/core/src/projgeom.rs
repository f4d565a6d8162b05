//! Points, subspaces and matrices of PG(n, F) for F a level of the tower.
//!
//! Subspaces are stored by a basis in reduced row-echelon form, so equality
//! of subspaces is equality of the stored matrices. Points are normalized
//! so that their first nonzero coordinate is 1.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{FieldTower, Level, LevelField};
use crate::rng::Rng;

/// Default limit on the number of points a single enumeration may visit.
pub const DEFAULT_CAP: u64 = 20_000_000;

// ---------------------------------------------------------------------------
// dense linear algebra on raw rows

/// Reduce `rows` to reduced row-echelon form in place, dropping zero rows.
/// Returns the pivot columns.
pub(crate) fn rref(f: &LevelField<'_>, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]);
        if inv != 1 {
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = f.neg(row[c]);
                for (x, &y) in row[c..ncols].iter_mut().zip(&pivot_row[c..ncols]) {
                    *x = f.add(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn rank(f: &LevelField<'_>, rows: &[Vec<u32>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of {v : M v = 0} for the given rows of M with `ncols` columns.
pub(crate) fn nullspace(f: &LevelField<'_>, rows: &[Vec<u32>], ncols: usize) -> Vec<Vec<u32>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u32; ncols];
            v[fc] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect()
}

fn normalize_in_place(f: &LevelField<'_>, v: &mut [u32]) -> bool {
    let Some(lead) = v.iter().copied().find(|&x| x != 0) else {
        return false;
    };
    if lead != 1 {
        let inv = f.inv(lead);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    true
}

// ---------------------------------------------------------------------------
// points

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    level: Level,
    coords: Vec<u32>,
}

impl ProjPoint {
    /// Normalize `coords` into a point of PG(len − 1, level).
    pub fn new(tower: &FieldTower, level: Level, mut coords: Vec<u32>) -> Result<Self> {
        let f = tower.field(level);
        if coords.iter().any(|&c| c >= f.size()) {
            return Err(Error::LevelMismatch {
                expected: level,
                found: Level::Sextic,
            });
        }
        if !normalize_in_place(&f, &mut coords) {
            return Err(Error::ZeroVector);
        }
        Ok(ProjPoint { level, coords })
    }

    /// Wrap coordinates already known to be normalized.
    pub(crate) fn from_normalized(level: Level, coords: Vec<u32>) -> Self {
        debug_assert!(coords.iter().find(|&&c| c != 0) == Some(&1));
        ProjPoint { level, coords }
    }

    /// Parse "(c0, c1, ...)" with entries in the field text encoding.
    pub fn parse(tower: &FieldTower, level: Level, text: &str) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(t);
        let coords = crate::fields::split_top_level(inner, ',')
            .iter()
            .map(|s| tower.parse_elem(s, level).map(|x| x.raw()))
            .collect::<Result<Vec<_>>>()?;
        ProjPoint::new(tower, level, coords)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn frobenius(&self, tower: &FieldTower, k: u32) -> ProjPoint {
        let f = tower.field(self.level);
        ProjPoint {
            level: self.level,
            coords: self.coords.iter().map(|&c| f.frob(c, k)).collect(),
        }
    }

    pub fn embed(&self, level: Level) -> ProjPoint {
        assert!(level >= self.level, "embed must go up the tower");
        ProjPoint {
            level,
            coords: self.coords.clone(),
        }
    }

    /// The same point over a subfield, if all coordinates lie there.
    pub fn descend(&self, tower: &FieldTower, level: Level) -> Option<ProjPoint> {
        let size = tower.order(level);
        self.coords.iter().all(|&c| c < size).then(|| ProjPoint {
            level,
            coords: self.coords.clone(),
        })
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace {
            level: self.level,
            ambient: self.ambient_dim(),
            rows: vec![self.coords.clone()],
        }
    }

    pub fn format(&self, tower: &FieldTower) -> String {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|&c| tower.format_raw(self.level, c))
            .collect();
        format!("({})", parts.join(","))
    }

    pub fn to_json(&self, tower: &FieldTower) -> serde_json::Value {
        serde_json::Value::Array(
            self.coords
                .iter()
                .map(|&c| serde_json::Value::String(tower.format_raw(self.level, c)))
                .collect(),
        )
    }
}

/// A uniformly random point of PG(n, level).
pub fn random_point(tower: &FieldTower, level: Level, n: usize, rng: &mut Rng) -> ProjPoint {
    let f = tower.field(level);
    loop {
        let mut v: Vec<u32> = (0..=n).map(|_| rng.below(f.size())).collect();
        if normalize_in_place(&f, &mut v) {
            return ProjPoint::from_normalized(level, v);
        }
    }
}

// ---------------------------------------------------------------------------
// subspaces

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    level: Level,
    ambient: usize,
    rows: Vec<Vec<u32>>,
}

impl Subspace {
    /// The subspace spanned by the given vectors of length n + 1.
    pub fn new(
        tower: &FieldTower,
        level: Level,
        n: usize,
        mut rows: Vec<Vec<u32>>,
    ) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != n + 1) {
            return Err(Error::MixedAmbient(n, r.len().saturating_sub(1)));
        }
        let f = tower.field(level);
        rref(&f, &mut rows);
        Ok(Subspace {
            level,
            ambient: n,
            rows,
        })
    }

    pub fn empty(level: Level, n: usize) -> Self {
        Subspace {
            level,
            ambient: n,
            rows: Vec::new(),
        }
    }

    pub fn whole(level: Level, n: usize) -> Self {
        let rows = (0..=n)
            .map(|i| {
                let mut r = vec![0; n + 1];
                r[i] = 1;
                r
            })
            .collect();
        Subspace {
            level,
            ambient: n,
            rows,
        }
    }

    /// Span of the coordinate vectors e_i for the listed indexes.
    pub fn coordinate(tower: &FieldTower, level: Level, n: usize, idx: &[usize]) -> Self {
        let rows = idx
            .iter()
            .map(|&i| {
                let mut r = vec![0; n + 1];
                r[i] = 1;
                r
            })
            .collect();
        Subspace::new(tower, level, n, rows).expect("coordinate rows have the right length")
    }

    pub fn from_points(tower: &FieldTower, points: &[ProjPoint]) -> Result<Self> {
        let first = points.first().ok_or(Error::ZeroVector)?;
        let (level, n) = (first.level, first.ambient_dim());
        for p in points {
            check_compat(level, n, p.level, p.ambient_dim())?;
        }
        Subspace::new(
            tower,
            level,
            n,
            points.iter().map(|p| p.coords.clone()).collect(),
        )
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Projective dimension; −1 for the empty subspace.
    pub fn dim(&self) -> isize {
        self.rows.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Echelon basis rows.
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn basis_points(&self) -> Vec<ProjPoint> {
        self.rows
            .iter()
            .map(|r| ProjPoint::from_normalized(self.level, r.clone()))
            .collect()
    }

    fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("rows are nonzero"))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords_of(&self, tower: &FieldTower, v: &[u32]) -> Option<Vec<u32>> {
        let f = tower.field(self.level);
        let cs: Vec<u32> = self.pivots().map(|p| v[p]).collect();
        let mut acc = vec![0u32; self.ambient + 1];
        for (c, row) in cs.iter().zip(&self.rows) {
            if *c != 0 {
                for (a, &r) in acc.iter_mut().zip(row) {
                    *a = f.add(*a, f.mul(*c, r));
                }
            }
        }
        (acc == v).then_some(cs)
    }

    pub fn contains_vec(&self, tower: &FieldTower, v: &[u32]) -> bool {
        v.len() == self.ambient + 1 && self.coords_of(tower, v).is_some()
    }

    pub fn contains_point(&self, tower: &FieldTower, p: &ProjPoint) -> bool {
        p.level == self.level && self.contains_vec(tower, &p.coords)
    }

    pub fn contains(&self, tower: &FieldTower, other: &Subspace) -> bool {
        other.level == self.level
            && other.ambient == self.ambient
            && other.rows.iter().all(|r| self.contains_vec(tower, r))
    }

    pub fn join(&self, tower: &FieldTower, other: &Subspace) -> Result<Subspace> {
        span(tower, &[self, other])
    }

    pub fn join_point(&self, tower: &FieldTower, p: &ProjPoint) -> Result<Subspace> {
        span(tower, &[self, &p.to_subspace()])
    }

    /// Rows spanning the annihilator (the linear equations of the subspace).
    pub fn equations(&self, tower: &FieldTower) -> Vec<Vec<u32>> {
        nullspace(&tower.field(self.level), &self.rows, self.ambient + 1)
    }

    pub fn meet(&self, tower: &FieldTower, other: &Subspace) -> Result<Subspace> {
        check_compat(self.level, self.ambient, other.level, other.ambient)?;
        let f = tower.field(self.level);
        let mut eqs = self.equations(tower);
        eqs.extend(other.equations(tower));
        let mut rows = if eqs.is_empty() {
            Subspace::whole(self.level, self.ambient).rows
        } else {
            nullspace(&f, &eqs, self.ambient + 1)
        };
        rref(&f, &mut rows);
        Ok(Subspace {
            level: self.level,
            ambient: self.ambient,
            rows,
        })
    }

    /// Dimension of the meet, computed from the rank of the join.
    pub fn meet_dim(&self, tower: &FieldTower, other: &Subspace) -> isize {
        let f = tower.field(self.level);
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        let r = if all.is_empty() { 0 } else { rank(&f, &all) };
        self.rows.len() as isize + other.rows.len() as isize - r as isize - 1
    }

    pub fn point_count(&self, tower: &FieldTower) -> u128 {
        let s = tower.order(self.level) as u128;
        (s.pow(self.rows.len() as u32) - 1) / (s - 1)
    }

    /// Visit every point once, in an unspecified but deterministic order.
    /// The callback receives normalized coordinates.
    pub fn for_each_point<F: FnMut(&[u32])>(
        &self,
        tower: &FieldTower,
        cap: u64,
        mut visit: F,
    ) -> Result<()> {
        let count = self.point_count(tower);
        if count > cap as u128 {
            return Err(Error::TooLarge { count, cap });
        }
        let f = tower.field(self.level);
        let size = f.size();
        let k = self.rows.len();
        let width = self.ambient + 1;
        let mut coeffs = vec![0u32; k];
        let mut buf = vec![0u32; width];
        // Lead coefficient 1 at index `lead`, free coefficients after it.
        for lead in 0..k {
            coeffs.iter_mut().for_each(|c| *c = 0);
            coeffs[lead] = 1;
            loop {
                buf.iter_mut().for_each(|x| *x = 0);
                for (c, row) in coeffs.iter().zip(&self.rows).skip(lead) {
                    if *c == 0 {
                        continue;
                    }
                    for (b, &r) in buf.iter_mut().zip(row) {
                        if r != 0 {
                            *b = f.add(*b, f.mul(*c, r));
                        }
                    }
                }
                visit(&buf);
                // odometer over coeffs[lead + 1..]
                let mut i = k;
                let mut exhausted = true;
                while i > lead + 1 {
                    i -= 1;
                    coeffs[i] += 1;
                    if coeffs[i] < size {
                        exhausted = false;
                        break;
                    }
                    coeffs[i] = 0;
                }
                if exhausted {
                    break;
                }
            }
        }
        Ok(())
    }

    /// All points, sorted lexicographically by normalized coordinates.
    pub fn enumerate_points(&self, tower: &FieldTower, cap: u64) -> Result<Vec<ProjPoint>> {
        let mut out = Vec::with_capacity(self.point_count(tower).min(cap as u128) as usize);
        self.for_each_point(tower, cap, |v| {
            out.push(ProjPoint::from_normalized(self.level, v.to_vec()))
        })?;
        out.sort();
        Ok(out)
    }

    /// Coordinate-wise x ↦ x^(q^k). Entrywise Frobenius preserves echelon form.
    pub fn frobenius(&self, tower: &FieldTower, k: u32) -> Subspace {
        let f = tower.field(self.level);
        Subspace {
            level: self.level,
            ambient: self.ambient,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&x| f.frob(x, k)).collect())
                .collect(),
        }
    }

    pub fn embed(&self, level: Level) -> Subspace {
        assert!(level >= self.level, "embed must go up the tower");
        Subspace {
            level,
            ambient: self.ambient,
            rows: self.rows.clone(),
        }
    }

    pub fn descend(&self, tower: &FieldTower, level: Level) -> Option<Subspace> {
        let size = tower.order(level);
        self.rows
            .iter()
            .all(|r| r.iter().all(|&x| x < size))
            .then(|| Subspace {
                level,
                ambient: self.ambient,
                rows: self.rows.clone(),
            })
    }

    /// The largest subspace defined over `target` whose extension lies in
    /// `self`: the meet of all Galois conjugates of `self` over `target`.
    pub fn rational_points(&self, tower: &FieldTower, target: Level) -> Subspace {
        assert!(target <= self.level, "target must be a subfield");
        let step = target.degree();
        let conjugates = self.level.degree() / step;
        let mut acc = self.clone();
        for j in 1..conjugates {
            if acc.is_empty() {
                break;
            }
            acc = acc
                .meet(tower, &self.frobenius(tower, j * step))
                .expect("conjugates share ambient and level");
        }
        acc.descend(tower, target)
            .expect("a Frobenius-stable echelon basis is rational")
    }

    pub fn to_json(&self, tower: &FieldTower) -> serde_json::Value {
        serde_json::Value::Array(
            self.basis_points()
                .iter()
                .map(|p| p.to_json(tower))
                .collect(),
        )
    }
}

fn check_compat(l1: Level, n1: usize, l2: Level, n2: usize) -> Result<()> {
    if n1 != n2 {
        return Err(Error::MixedAmbient(n1, n2));
    }
    if l1 != l2 {
        return Err(Error::MixedLevel(l1, l2));
    }
    Ok(())
}

/// Smallest subspace containing all items.
pub fn span(tower: &FieldTower, items: &[&Subspace]) -> Result<Subspace> {
    let first = items.first().ok_or(Error::ZeroVector)?;
    let mut rows = Vec::new();
    for s in items {
        check_compat(first.level, first.ambient, s.level, s.ambient)?;
        rows.extend(s.rows.iter().cloned());
    }
    Subspace::new(tower, first.level, first.ambient, rows)
}

/// Span of ⟨X, X^q, X^{q²}⟩ rationalized through the trace basis
/// {Σ_j (τ^i)^{q^j} X^{q^j} : i = 0, 1, 2}. Input must be at cubic level.
pub fn rational_span_by_trace(tower: &FieldTower, x: &ProjPoint) -> Subspace {
    assert_eq!(x.level, Level::Cubic);
    let f = tower.field(Level::Cubic);
    let tau = tower.tau().raw();
    let conj: Vec<ProjPoint> = (0..3).map(|j| x.frobenius(tower, j)).collect();
    let rows: Vec<Vec<u32>> = (0..3u64)
        .map(|i| {
            let ti = f.pow(tau, i);
            (0..x.coords.len())
                .map(|c| {
                    (0..3u32).fold(0, |acc, j| {
                        f.add(acc, f.mul(f.frob(ti, j), conj[j as usize].coords[c]))
                    })
                })
                .collect()
        })
        .collect();
    let sub = Subspace::new(tower, Level::Cubic, x.ambient_dim(), rows).expect("lengths agree");
    sub.descend(tower, Level::Base)
        .expect("trace vectors are Frobenius-fixed")
}

/// A uniformly random d-dimensional subspace of PG(n, level).
pub fn random_subspace(
    tower: &FieldTower,
    level: Level,
    n: usize,
    d: isize,
    rng: &mut Rng,
) -> Subspace {
    assert!(d >= -1 && d <= n as isize, "dimension out of range");
    let mut s = Subspace::empty(level, n);
    while s.dim() < d {
        let p = random_point(tower, level, n, rng);
        if !s.contains_point(tower, &p) {
            s = s.join_point(tower, &p).expect("compatible");
        }
    }
    s
}

// ---------------------------------------------------------------------------
// matrices

/// Dense square or rectangular matrix over one level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    level: Level,
    rows: Vec<Vec<u32>>,
}

impl Matrix {
    pub fn new(level: Level, rows: Vec<Vec<u32>>) -> Self {
        Matrix { level, rows }
    }

    pub fn identity(level: Level, n: usize) -> Self {
        Matrix {
            level,
            rows: Subspace::whole(level, n - 1).rows,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(level: Level, cols: &[Vec<u32>]) -> Self {
        let nrows = cols.first().map_or(0, Vec::len);
        Matrix {
            level,
            rows: (0..nrows)
                .map(|i| cols.iter().map(|c| c[i]).collect())
                .collect(),
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn embed(&self, level: Level) -> Matrix {
        Matrix {
            level,
            rows: self.rows.clone(),
        }
    }

    pub fn mul(&self, tower: &FieldTower, other: &Matrix) -> Matrix {
        let f = tower.field(self.level);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols())
                    .map(|j| {
                        r.iter()
                            .zip(&other.rows)
                            .fold(0, |acc, (&a, orow)| f.add(acc, f.mul(a, orow[j])))
                    })
                    .collect()
            })
            .collect();
        Matrix {
            level: self.level,
            rows,
        }
    }

    pub fn mul_vec(&self, tower: &FieldTower, v: &[u32]) -> Vec<u32> {
        let f = tower.field(self.level);
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn frobenius(&self, tower: &FieldTower, k: u32) -> Matrix {
        let f = tower.field(self.level);
        Matrix {
            level: self.level,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&x| f.frob(x, k)).collect())
                .collect(),
        }
    }

    pub fn inverse(&self, tower: &FieldTower) -> Result<Matrix> {
        let n = self.nrows();
        if self.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix has no inverse",
                n,
                self.ncols()
            )));
        }
        let f = tower.field(self.level);
        let mut aug: Vec<Vec<u32>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| u32::from(i == j)));
                row
            })
            .collect();
        let pivots = rref(&f, &mut aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        Ok(Matrix {
            level: self.level,
            rows: aug.into_iter().map(|r| r[n..].to_vec()).collect(),
        })
    }

    pub fn rank(&self, tower: &FieldTower) -> usize {
        rank(&tower.field(self.level), &self.rows)
    }

    pub fn is_identity(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == u32::from(i == j)))
    }
}

/// Normalized M · P^(q^k).
pub fn apply_semilinear(
    tower: &FieldTower,
    m: &Matrix,
    frob_k: u32,
    p: &ProjPoint,
) -> Result<ProjPoint> {
    if m.nrows() != m.ncols() || m.ncols() != p.coords.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix applied to a point of PG({})",
            m.nrows(),
            m.ncols(),
            p.ambient_dim()
        )));
    }
    let image = m.mul_vec(tower, &p.frobenius(tower, frob_k).coords);
    ProjPoint::new(tower, p.level, image).map_err(|_| Error::SingularMatrix)
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-space of PG({}) over {:?}: {:?}",
            self.dim(),
            self.ambient,
            self.level,
            self.rows
        )
    }
}
