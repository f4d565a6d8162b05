//! Homogeneous forms over a tower level, their expansion into GF(q)-forms,
//! and varieties defined by them.
//!
//! A variety is a list of forms. Extending it to a larger field keeps the
//! forms and re-evaluates them there, so two handles with the same points but
//! different forms can extend differently.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{split_top_level, FieldTower, Level, LevelField};
use crate::projgeom::{nullspace, random_point, ProjPoint, Subspace};
use crate::rng::Rng;

/// Sparse homogeneous polynomial. Terms are keyed by exponent vectors;
/// no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousForm {
    level: Level,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, u32>,
}

impl HomogeneousForm {
    pub fn zero(level: Level, nvars: usize, degree: u32) -> Self {
        HomogeneousForm {
            level,
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Sum of the given terms; like monomials are combined.
    pub fn from_terms(
        tower: &FieldTower,
        level: Level,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, u32)>,
    ) -> Result<Self> {
        let f = tower.field(level);
        let mut out: Option<HomogeneousForm> = None;
        for (exps, coeff) in terms {
            if exps.len() != nvars {
                return Err(Error::WrongArity {
                    expected: nvars,
                    found: exps.len(),
                });
            }
            if coeff >= f.size() {
                return Err(Error::LevelMismatch {
                    expected: level,
                    found: Level::Sextic,
                });
            }
            let deg: u32 = exps.iter().sum();
            let form = out.get_or_insert_with(|| HomogeneousForm::zero(level, nvars, deg));
            if form.degree != deg {
                return Err(Error::NotHomogeneous);
            }
            form.add_term(&f, exps, coeff);
        }
        out.ok_or_else(|| Error::Parse {
            text: String::new(),
            reason: "a form needs at least one term".into(),
        })
    }

    /// Linear form Σ cᵢxᵢ.
    pub fn linear(level: Level, coeffs: &[u32]) -> Self {
        let n = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c)
            })
            .collect();
        HomogeneousForm {
            level,
            nvars: n,
            degree: 1,
            terms,
        }
    }

    /// c·x^e.
    pub fn monomial(level: Level, exps: Vec<u32>, coeff: u32) -> Self {
        let degree = exps.iter().sum();
        let nvars = exps.len();
        let terms = if coeff == 0 {
            BTreeMap::new()
        } else {
            BTreeMap::from([(exps, coeff)])
        };
        HomogeneousForm {
            level,
            nvars,
            degree,
            terms,
        }
    }

    /// The constant 1 as a degree-0 form.
    pub fn one(level: Level, nvars: usize) -> Self {
        HomogeneousForm {
            level,
            nvars,
            degree: 0,
            terms: BTreeMap::from([(vec![0; nvars], 1)]),
        }
    }

    fn add_term(&mut self, f: &LevelField<'_>, exps: Vec<u32>, coeff: u32) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(exps).or_insert(0);
        *slot = f.add(*slot, coeff);
        if *slot == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order, x₀ first.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, u32)> {
        self.terms.iter().rev().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> u32 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn embed(&self, level: Level) -> Result<Self> {
        if level < self.level {
            return Err(Error::LevelMismatch {
                expected: self.level,
                found: level,
            });
        }
        Ok(HomogeneousForm {
            level,
            ..self.clone()
        })
    }

    pub fn descend(&self, tower: &FieldTower, level: Level) -> Result<Self> {
        let size = tower.order(level);
        if self.terms.values().any(|&c| c >= size) {
            return Err(Error::NotInSubfield(level));
        }
        Ok(HomogeneousForm {
            level,
            ..self.clone()
        })
    }

    /// Value at `point`, computed in the field of the point's level.
    pub fn eval(&self, tower: &FieldTower, level: Level, point: &[u32]) -> u32 {
        debug_assert!(level >= self.level);
        debug_assert_eq!(point.len(), self.nvars);
        let f = tower.field(level);
        let mut acc = 0;
        for (exps, &c) in &self.terms {
            let mut m = c;
            for (&x, &e) in point.iter().zip(exps) {
                if e == 0 {
                    continue;
                }
                if x == 0 {
                    m = 0;
                    break;
                }
                for _ in 0..e {
                    m = f.mul(m, x);
                }
            }
            acc = f.add(acc, m);
        }
        acc
    }

    pub fn eval_point(&self, tower: &FieldTower, p: &ProjPoint) -> u32 {
        self.eval(tower, p.level(), p.coords())
    }

    fn common_level(&self, other: &Self) -> Result<Level> {
        if self.nvars != other.nvars {
            return Err(Error::WrongArity {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(self.level.max(other.level))
    }

    pub fn add(&self, tower: &FieldTower, other: &Self) -> Result<Self> {
        let level = self.common_level(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::NotHomogeneous);
        }
        let f = tower.field(level);
        let mut out = self.embed(level)?;
        if out.is_zero() {
            out.degree = other.degree;
        }
        for (e, &c) in &other.terms {
            out.add_term(&f, e.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self, tower: &FieldTower) -> Self {
        let f = tower.field(self.level);
        HomogeneousForm {
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.clone(), f.neg(c)))
                .collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, tower: &FieldTower, other: &Self) -> Result<Self> {
        self.add(tower, &other.neg(tower))
    }

    /// c·F for a scalar c at `level` ≥ the form's level.
    pub fn scale(&self, tower: &FieldTower, level: Level, c: u32) -> Self {
        let level = level.max(self.level);
        let f = tower.field(level);
        let mut out = HomogeneousForm::zero(level, self.nvars, self.degree);
        for (e, &x) in &self.terms {
            out.add_term(&f, e.clone(), f.mul(c, x));
        }
        out
    }

    pub fn mul(&self, tower: &FieldTower, other: &Self) -> Result<Self> {
        let level = self.common_level(other)?;
        let f = tower.field(level);
        let mut out = HomogeneousForm::zero(level, self.nvars, self.degree + other.degree);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(&f, e, f.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// F(s₀, …, s_{n−1}) for forms sᵢ sharing arity and degree.
    pub fn compose(&self, tower: &FieldTower, subs: &[HomogeneousForm]) -> Result<Self> {
        if subs.len() != self.nvars {
            return Err(Error::WrongArity {
                expected: self.nvars,
                found: subs.len(),
            });
        }
        let m = subs.first().map_or(0, |s| s.nvars);
        let sub_deg = subs.first().map_or(1, |s| s.degree);
        let level = subs.iter().fold(self.level, |l, s| l.max(s.level));
        if subs.iter().any(|s| s.nvars != m) {
            return Err(Error::ArityMismatch(
                "substituted forms differ in arity".into(),
            ));
        }
        let f = tower.field(level);
        // powers[i][k] = subs[i]^k
        let mut powers: Vec<Vec<HomogeneousForm>> = Vec::with_capacity(self.nvars);
        for s in subs {
            let s = s.embed(level)?;
            let mut ps = vec![HomogeneousForm::one(level, m)];
            for k in 1..=self.degree as usize {
                let next = ps[k - 1].mul(tower, &s)?;
                ps.push(next);
            }
            powers.push(ps);
        }
        let mut out = HomogeneousForm::zero(level, m, self.degree * sub_deg);
        for (exps, &c) in &self.terms {
            let mut term = HomogeneousForm::one(level, m).scale(tower, level, c);
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(tower, &powers[i][e as usize])?;
                }
            }
            for (e, &x) in &term.terms {
                out.add_term(&f, e.clone(), x);
            }
        }
        Ok(out)
    }

    /// Coefficients raised to q^k; exponents unchanged.
    pub fn conjugate(&self, tower: &FieldTower, k: u32) -> Self {
        let f = tower.field(self.level);
        HomogeneousForm {
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.clone(), f.frob(c, k)))
                .collect(),
            ..self.clone()
        }
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial(&self, tower: &FieldTower, i: usize) -> Self {
        let f = tower.field(self.level);
        let mut out = HomogeneousForm::zero(self.level, self.nvars, self.degree.saturating_sub(1));
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(&f, d, f.mul(f.from_int(e[i] as i64), c));
        }
        out
    }

    /// Parse "x*z:1, y^2:-1". Variables are x, y, z for three variables,
    /// x0 … x{n−1} otherwise, with x0..z2 accepted for nine variables.
    pub fn parse(tower: &FieldTower, level: Level, nvars: usize, text: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            text: text.to_string(),
            reason,
        };
        let mut terms = Vec::new();
        for part in split_top_level(text, ',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (mono, coeff) = part
                .rsplit_once(':')
                .ok_or_else(|| err(format!("term `{part}` lacks `:coefficient`")))?;
            let coeff = tower.parse_elem(coeff, level)?.raw();
            let mut exps = vec![0u32; nvars];
            let mono = mono.trim();
            if mono != "1" {
                for factor in mono.split('*') {
                    let factor = factor.trim();
                    let (name, pow) = match factor.split_once('^') {
                        Some((n, p)) => (
                            n.trim(),
                            p.trim()
                                .parse::<u32>()
                                .map_err(|_| err(format!("bad exponent in `{factor}`")))?,
                        ),
                        None => (factor, 1),
                    };
                    let idx = var_index(nvars, name)
                        .ok_or_else(|| err(format!("unknown variable `{name}`")))?;
                    exps[idx] += pow;
                }
            }
            terms.push((exps, coeff));
        }
        HomogeneousForm::from_terms(tower, level, nvars, terms)
    }

    pub fn format(&self, tower: &FieldTower) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        let v = var_name(self.nvars, i);
                        if k == 1 {
                            v
                        } else {
                            format!("{v}^{k}")
                        }
                    })
                    .collect();
                let mono = if mono.is_empty() {
                    "1".into()
                } else {
                    mono.join("*")
                };
                format!("{mono}:{}", tower.format_raw(self.level, c))
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn var_name(nvars: usize, i: usize) -> String {
    if nvars == 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{i}")
    }
}

fn var_index(nvars: usize, name: &str) -> Option<usize> {
    if nvars == 3 {
        if let Some(i) = ["x", "y", "z"].iter().position(|&v| v == name) {
            return Some(i);
        }
    }
    if nvars == 9 {
        let b = name.as_bytes();
        if b.len() == 2 && (b'0'..=b'2').contains(&b[1]) {
            let blk = match b[0] {
                b'x' => Some(0),
                b'y' => Some(1),
                b'z' => Some(2),
                _ => None,
            };
            if let Some(blk) = blk {
                return Some(3 * blk + (b[1] - b'0') as usize);
            }
        }
    }
    let i: usize = name.strip_prefix('x')?.parse().ok()?;
    (i < nvars).then_some(i)
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "form[{:?}, {} vars, deg {}]{:?}",
            self.level, self.nvars, self.degree, self.terms
        )
    }
}

/// A random form with each monomial's coefficient uniform over the level.
pub fn random_form(
    tower: &FieldTower,
    level: Level,
    nvars: usize,
    degree: u32,
    rng: &mut Rng,
) -> HomogeneousForm {
    let f = tower.field(level);
    let mut out = HomogeneousForm::zero(level, nvars, degree);
    for e in monomials(nvars, degree) {
        let c = rng.below(f.size());
        out.add_term(&f, e, c);
    }
    out
}

/// All exponent vectors of the given arity and total degree.
pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: usize, deg: u32, out: &mut Vec<Vec<u32>>) {
        if left == 1 {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for d in (0..=deg).rev() {
            prefix.push(d);
            rec(prefix, left - 1, deg - d, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(&mut Vec::new(), nvars, degree, &mut out);
    }
    out
}

// ---------------------------------------------------------------------------
// expansion over GF(q)

/// F(x, y, z) rewritten in the nine GF(q)-coordinates of PG(8,q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedForm {
    pub source: HomogeneousForm,
    /// F(x₀+τx₁+τ²x₂, y₀+τy₁+τ²y₂, z₀+τz₁+τ²z₂), cubic level.
    pub g: HomogeneousForm,
    /// g = parts[0] + τ·parts[1] + τ²·parts[2], each over GF(q).
    pub parts: [HomogeneousForm; 3],
}

pub fn expand_form(tower: &FieldTower, form: &HomogeneousForm) -> Result<ExpandedForm> {
    if form.nvars != 3 {
        return Err(Error::WrongArity {
            expected: 3,
            found: form.nvars,
        });
    }
    let f = tower.field(Level::Cubic);
    let tau = tower.tau().raw();
    let subs: Vec<HomogeneousForm> = (0..3)
        .map(|blk| {
            let mut c = vec![0u32; 9];
            c[3 * blk] = 1;
            c[3 * blk + 1] = tau;
            c[3 * blk + 2] = f.mul(tau, tau);
            HomogeneousForm::linear(Level::Cubic, &c)
        })
        .collect();
    let source = form.embed(Level::Cubic)?;
    let g = source.compose(tower, &subs)?;
    let q = tower.q();
    let parts: [HomogeneousForm; 3] = std::array::from_fn(|k| {
        let b = tower.field(Level::Base);
        let mut out = HomogeneousForm::zero(Level::Base, 9, g.degree);
        for (e, &c) in &g.terms {
            let digit = (c / q.pow(k as u32)) % q;
            out.add_term(&b, e.clone(), digit);
        }
        out
    });
    Ok(ExpandedForm { source, g, parts })
}

impl ExpandedForm {
    /// parts[0] + τ·parts[1] + τ²·parts[2] as a cubic-level form.
    pub fn recombine(&self, tower: &FieldTower) -> HomogeneousForm {
        let f = tower.field(Level::Cubic);
        let tau = tower.tau().raw();
        let mut acc = HomogeneousForm::zero(Level::Cubic, 9, self.g.degree);
        for (k, part) in self.parts.iter().enumerate() {
            let scaled = part.scale(tower, Level::Cubic, f.pow(tau, k as u64));
            acc = acc.add(tower, &scaled).expect("same arity and degree");
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// varieties

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyHandle {
    level: Level,
    ambient: usize,
    forms: Vec<HomogeneousForm>,
}

impl VarietyHandle {
    pub fn new(level: Level, ambient: usize, forms: Vec<HomogeneousForm>) -> Result<Self> {
        for g in &forms {
            if g.nvars != ambient + 1 {
                return Err(Error::WrongArity {
                    expected: ambient + 1,
                    found: g.nvars,
                });
            }
            if g.level > level {
                return Err(Error::LevelMismatch {
                    expected: level,
                    found: g.level,
                });
            }
        }
        let forms = forms
            .into_iter()
            .map(|g| g.embed(level).expect("checked above"))
            .collect();
        Ok(VarietyHandle {
            level,
            ambient,
            forms,
        })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn forms(&self) -> &[HomogeneousForm] {
        &self.forms
    }

    pub fn contains(&self, tower: &FieldTower, level: Level, v: &[u32]) -> bool {
        self.forms.iter().all(|g| g.eval(tower, level, v) == 0)
    }

    pub fn contains_point(&self, tower: &FieldTower, p: &ProjPoint) -> bool {
        self.contains(tower, p.level(), p.coords())
    }

    /// Points of `domain` on the variety, sorted. The domain's level is
    /// the evaluation level and must not be below the forms' level.
    pub fn points(
        &self,
        tower: &FieldTower,
        domain: &Subspace,
        cap: u64,
    ) -> Result<Vec<ProjPoint>> {
        if domain.level() < self.level {
            return Err(Error::LevelMismatch {
                expected: self.level,
                found: domain.level(),
            });
        }
        if domain.ambient_dim() != self.ambient {
            return Err(Error::MixedAmbient(self.ambient, domain.ambient_dim()));
        }
        let level = domain.level();
        let mut out = Vec::new();
        domain.for_each_point(tower, cap, |v| {
            if self.contains(tower, level, v) {
                out.push(ProjPoint::new(tower, level, v.to_vec()).expect("normalized"));
            }
        })?;
        out.sort();
        Ok(out)
    }

    /// Same forms, read over a larger field.
    pub fn extend(&self, level: Level) -> Result<Self> {
        if level < self.level {
            return Err(Error::LevelMismatch {
                expected: self.level,
                found: level,
            });
        }
        VarietyHandle::new(level, self.ambient, self.forms.clone())
    }

    /// Pull the forms back along the echelon parametrization of `s`.
    /// Returns the restricted handle in PG(dim s) and the number of forms
    /// that became identically zero (these are dropped).
    pub fn restrict_to_subspace(
        &self,
        tower: &FieldTower,
        s: &Subspace,
    ) -> Result<(VarietyHandle, usize)> {
        if s.is_empty() {
            return Err(Error::ZeroVector);
        }
        let level = self.level.max(s.level());
        let k = s.basis().len();
        let coords: Vec<HomogeneousForm> = (0..=self.ambient)
            .map(|i| {
                let c: Vec<u32> = s.basis().iter().map(|row| row[i]).collect();
                HomogeneousForm::linear(level, &c)
            })
            .collect();
        let mut dropped = 0;
        let mut forms = Vec::new();
        for g in &self.forms {
            let r = g.compose(tower, &coords)?;
            if r.is_zero() {
                dropped += 1;
            } else {
                forms.push(r);
            }
        }
        Ok((VarietyHandle::new(level, k - 1, forms)?, dropped))
    }
}

// ---------------------------------------------------------------------------
// conics

/// A ternary quadratic form is nondegenerate when its partial derivatives
/// have no common zero, or (characteristic 2) their single common zero N
/// satisfies F(N) ≠ 0.
pub fn is_nondegenerate_conic(tower: &FieldTower, form: &HomogeneousForm) -> bool {
    if form.nvars != 3 || form.degree != 2 || form.is_zero() {
        return false;
    }
    let level = form.level;
    let f = tower.field(level);
    let rows: Vec<Vec<u32>> = (0..3)
        .map(|i| {
            let d = form.partial(tower, i);
            (0..3)
                .map(|j| {
                    let mut e = vec![0; 3];
                    e[j] = 1;
                    d.coefficient(&e)
                })
                .collect()
        })
        .collect();
    let kernel = nullspace(&f, &rows, 3);
    match kernel.len() {
        0 => true,
        1 => form.eval(tower, level, &kernel[0]) != 0,
        _ => false,
    }
}

/// The three quadrics of PG(8,q) whose common zeros are the spread planes
/// of the conic's points.
pub fn conic_to_quadrics(
    tower: &FieldTower,
    form: &HomogeneousForm,
) -> Result<[HomogeneousForm; 3]> {
    if form.nvars != 3 {
        return Err(Error::WrongArity {
            expected: 3,
            found: form.nvars,
        });
    }
    if form.degree != 2 || !is_nondegenerate_conic(tower, form) {
        return Err(Error::DegenerateConic);
    }
    Ok(expand_form(tower, form)?.parts)
}

/// A random nondegenerate conic at `level`.
pub fn random_conic(tower: &FieldTower, level: Level, rng: &mut Rng) -> HomogeneousForm {
    loop {
        let c = random_form(tower, level, 3, 2, rng);
        if is_nondegenerate_conic(tower, &c) {
            return c;
        }
    }
}

// ---------------------------------------------------------------------------
// cones

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ConeReport {
    pub line_samples: u64,
    pub line_failures: u64,
    pub vertex_samples: u64,
    pub vertex_failures: u64,
    pub zeros_found: u64,
    pub draws: u64,
    pub vertex_zeros: u64,
    pub projections_in_base: u64,
    pub projection_failures: u64,
    pub witness: Option<String>,
    pub pass: bool,
}

/// Project `p` from `vertex` onto `target`, given target ⊕ vertex = whole.
/// Returns None when `p` lies in the vertex.
pub fn project_from(
    tower: &FieldTower,
    p: &[u32],
    target: &Subspace,
    vertex: &Subspace,
) -> Result<Option<ProjPoint>> {
    let level = target.level();
    let f = tower.field(level);
    let n = target.ambient_dim() + 1;
    let mut basis: Vec<Vec<u32>> = target.basis().to_vec();
    basis.extend(vertex.basis().iter().cloned());
    if basis.len() != n {
        return Err(Error::DimensionMismatch(
            "target and vertex must be complementary".into(),
        ));
    }
    // Solve Σ cᵢ basisᵢ = p: transpose system with p appended.
    let mut aug: Vec<Vec<u32>> = (0..n)
        .map(|row| {
            let mut r: Vec<u32> = basis.iter().map(|b| b[row]).collect();
            r.push(p[row]);
            r
        })
        .collect();
    let pivots = crate::projgeom::rref(&f, &mut aug);
    if pivots.len() != n || pivots.contains(&n) {
        return Err(Error::SingularMatrix);
    }
    let k = target.basis().len();
    let cs: Vec<u32> = aug.iter().take(k).map(|r| r[n]).collect();
    let mut img = vec![0u32; n];
    for (c, b) in cs.iter().zip(target.basis()) {
        for (x, &y) in img.iter_mut().zip(b) {
            *x = f.add(*x, f.mul(*c, y));
        }
    }
    Ok(ProjPoint::new(tower, level, img).ok())
}

fn random_combination(tower: &FieldTower, s: &Subspace, rng: &mut Rng) -> Vec<u32> {
    let f = tower.field(s.level());
    loop {
        let cs: Vec<u32> = s.basis().iter().map(|_| rng.below(f.size())).collect();
        if cs.iter().all(|&c| c == 0) {
            continue;
        }
        let mut v = vec![0u32; s.ambient_dim() + 1];
        for (c, row) in cs.iter().zip(s.basis()) {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(*c, y));
            }
        }
        return v;
    }
}

/// Check that V(g) is the cone with vertex `vertex` over `base` ⊂ `target`.
///
/// Samples `samples` base–vertex lines and `samples` vertex points, then
/// rejection-samples zeros of `g` until `samples` of them off the vertex
/// have been projected onto `target`, within 512·`samples` draws.
pub fn verify_cone(
    tower: &FieldTower,
    g: &HomogeneousForm,
    base: &[ProjPoint],
    target: &Subspace,
    vertex: &Subspace,
    rng: &mut Rng,
    samples: usize,
) -> Result<ConeReport> {
    let level = target.level();
    let f = tower.field(level);
    let mut rep = ConeReport::default();
    let base_set: HashSet<&ProjPoint> = base.iter().collect();
    let witness = |rep: &mut ConeReport, msg: String| {
        if rep.witness.is_none() {
            rep.witness = Some(msg);
        }
    };
    if base.is_empty() {
        return Err(Error::DimensionMismatch("empty cone base".into()));
    }

    let mut line_rng = rng.split("lines");
    for i in 0..samples {
        let b = &base[line_rng.below(base.len() as u32) as usize];
        let v = random_combination(tower, vertex, &mut line_rng);
        let lambda = line_rng.below(f.size());
        let pt: Vec<u32> = b
            .coords()
            .iter()
            .zip(&v)
            .map(|(&x, &y)| f.add(x, f.mul(lambda, y)))
            .collect();
        rep.line_samples += 1;
        if g.eval(tower, level, &pt) != 0 {
            rep.line_failures += 1;
            witness(
                &mut rep,
                format!("line sample {i}: base {} + λ·vertex point", b.format(tower)),
            );
        }
    }

    let mut vertex_rng = rng.split("vertex");
    for i in 0..samples {
        let v = random_combination(tower, vertex, &mut vertex_rng);
        rep.vertex_samples += 1;
        if g.eval(tower, level, &v) != 0 {
            rep.vertex_failures += 1;
            witness(&mut rep, format!("vertex sample {i} is not a zero"));
        }
    }

    let mut zero_rng = rng.split("zeros");
    let budget = 512 * samples as u64;
    let n = target.ambient_dim();
    // Zeros on the vertex have no projection and do not count as samples.
    while ((rep.projections_in_base + rep.projection_failures) as usize) < samples {
        if rep.draws >= budget {
            return Err(Error::SamplingExhausted {
                found: (rep.projections_in_base + rep.projection_failures) as usize,
                needed: samples,
                draws: rep.draws,
            });
        }
        rep.draws += 1;
        let p = random_point(tower, level, n, &mut zero_rng);
        if g.eval_point(tower, &p) != 0 {
            continue;
        }
        rep.zeros_found += 1;
        match project_from(tower, p.coords(), target, vertex)? {
            None => rep.vertex_zeros += 1,
            Some(img) if base_set.contains(&img) => rep.projections_in_base += 1,
            Some(img) => {
                rep.projection_failures += 1;
                witness(
                    &mut rep,
                    format!(
                        "zero {} projects to {} outside the base",
                        p.format(tower),
                        img.format(tower)
                    ),
                );
            }
        }
    }
    rep.pass = rep.line_failures == 0 && rep.vertex_failures == 0 && rep.projection_failures == 0;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bose::BoseFrame;
    use crate::projgeom::DEFAULT_CAP;

    fn t2() -> FieldTower {
        FieldTower::new(2, 1, [1, 1, 0]).unwrap()
    }

    #[test]
    fn parse_and_format_round_trip() {
        let t = t2();
        let g = HomogeneousForm::parse(&t, Level::Cubic, 3, "x*z:1, y^2:-1").unwrap();
        assert_eq!(g.degree(), 2);
        assert_eq!(g.format(&t), "x*z:[1,0,0], y^2:[1,0,0]");
        let back = HomogeneousForm::parse(&t, Level::Cubic, 3, &g.format(&t)).unwrap();
        assert_eq!(back, g);
        let h = HomogeneousForm::parse(&t, Level::Base, 9, "x0*z2:1, y1^2:1").unwrap();
        assert_eq!(h.coefficient(&[1, 0, 0, 0, 0, 0, 0, 0, 1]), 1);
        assert_eq!(h.coefficient(&[0, 0, 0, 0, 2, 0, 0, 0, 0]), 1);
        assert_eq!(
            HomogeneousForm::parse(&t, Level::Base, 3, "x:1, y^2:1"),
            Err(Error::NotHomogeneous)
        );
        assert!(HomogeneousForm::parse(&t, Level::Base, 3, "w:1").is_err());
    }

    #[test]
    fn expansion_of_a_variable() {
        let t = t2();
        let x = HomogeneousForm::parse(&t, Level::Cubic, 3, "x:1").unwrap();
        let e = expand_form(&t, &x).unwrap();
        for k in 0..3 {
            assert_eq!(
                e.parts[k],
                HomogeneousForm::linear(Level::Base, &unit(9, k))
            );
        }
    }

    fn unit(n: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    #[test]
    fn expansion_of_x_squared_in_characteristic_two() {
        let t = t2();
        let x2 = HomogeneousForm::parse(&t, Level::Cubic, 3, "x^2:1").unwrap();
        let e = expand_form(&t, &x2).unwrap();
        let p = |s| HomogeneousForm::parse(&t, Level::Base, 9, s).unwrap();
        assert_eq!(e.parts[0], p("x0^2:1"));
        assert_eq!(e.parts[1], p("x2^2:1"));
        assert_eq!(e.parts[2], p("x1^2:1, x2^2:1"));
        assert_eq!(e.recombine(&t), e.g);
    }

    #[test]
    fn degenerate_and_nondegenerate_conics() {
        for q in [2, 3, 4] {
            let t = FieldTower::for_order(q).unwrap();
            let c = HomogeneousForm::parse(&t, Level::Cubic, 3, "x*z:1, y^2:-1").unwrap();
            assert!(is_nondegenerate_conic(&t, &c));
            let d = HomogeneousForm::parse(&t, Level::Cubic, 3, "x^2:1").unwrap();
            assert_eq!(conic_to_quadrics(&t, &d), Err(Error::DegenerateConic));
            let pair = HomogeneousForm::parse(&t, Level::Cubic, 3, "x*y:1").unwrap();
            assert!(!is_nondegenerate_conic(&t, &pair));
        }
    }

    #[test]
    fn conic_quadrics_cut_out_its_spread_planes() {
        let t = t2();
        let fr = BoseFrame::new(t.clone());
        let c = HomogeneousForm::parse(&t, Level::Cubic, 3, "x*z:1, y^2:-1").unwrap();
        let qs = conic_to_quadrics(&t, &c).unwrap();
        let v = VarietyHandle::new(Level::Base, 8, qs.to_vec()).unwrap();
        let pts = v
            .points(&t, &Subspace::whole(Level::Base, 8), DEFAULT_CAP)
            .unwrap();
        assert_eq!(pts.len(), 63);
        let conic = VarietyHandle::new(Level::Cubic, 2, vec![c]).unwrap();
        let on = conic
            .points(&t, &Subspace::whole(Level::Cubic, 2), DEFAULT_CAP)
            .unwrap();
        assert_eq!(on.len(), 9);
        let mut union: Vec<ProjPoint> = on
            .iter()
            .flat_map(|p| fr.plane_of(p).enumerate_points(&t, DEFAULT_CAP).unwrap())
            .collect();
        union.sort();
        assert_eq!(union, pts);
    }

    #[test]
    fn empty_variety_is_the_domain() {
        let t = t2();
        let v = VarietyHandle::new(Level::Base, 2, vec![]).unwrap();
        let pts = v
            .points(&t, &Subspace::whole(Level::Base, 2), DEFAULT_CAP)
            .unwrap();
        assert_eq!(pts.len(), 7);
        assert!(v.extend(Level::Cubic).unwrap().forms().is_empty());
    }

    #[test]
    fn level_checks() {
        let t = t2();
        let g = HomogeneousForm::parse(&t, Level::Cubic, 3, "x:[0,1,0]").unwrap();
        let v = VarietyHandle::new(Level::Cubic, 2, vec![g]).unwrap();
        assert!(matches!(
            v.points(&t, &Subspace::whole(Level::Base, 2), DEFAULT_CAP),
            Err(Error::LevelMismatch { .. })
        ));
        assert!(v.extend(Level::Base).is_err());
    }

    #[test]
    fn conjugation_identities() {
        let t = t2();
        let mut rng = Rng::new(9);
        let g = random_form(&t, Level::Cubic, 3, 2, &mut rng);
        assert_eq!(g.conjugate(&t, 3), g);
        let r = random_form(&t, Level::Base, 3, 2, &mut rng)
            .embed(Level::Cubic)
            .unwrap();
        assert_eq!(r.conjugate(&t, 1), r);
    }

    #[test]
    fn restriction_to_a_line_inside_a_quadric() {
        let t = FieldTower::for_order(3).unwrap();
        let quad = HomogeneousForm::parse(&t, Level::Base, 4, "x0*x3:1, x1*x2:-1").unwrap();
        let v = VarietyHandle::new(Level::Base, 3, vec![quad]).unwrap();
        let line = Subspace::coordinate(&t, Level::Base, 3, &[0, 1]);
        let (r, dropped) = v.restrict_to_subspace(&t, &line).unwrap();
        assert_eq!(dropped, 1);
        assert!(r.forms().is_empty());
        assert_eq!(r.ambient_dim(), 1);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(9, 2).len(), 45);
        assert_eq!(monomials(6, 2).len(), 21);
    }
}
