use boselab_core::harness::sigma_summary;
use boselab_core::substructures::sigma_parametrization;
use boselab_core::{
    expand_form as expand, run_suite as run, BoseFrame as CoreFrame, FieldElem,
    FieldTower as CoreTower, HomogeneousForm, Level, ProjPoint, SuiteParams, DEFAULT_CAP,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: boselab_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn level(name: &str) -> PyResult<Level> {
    Level::parse(name).ok_or_else(|| PyValueError::new_err(format!("unknown level {name:?}")))
}

fn build_tower(q: u32, modulus: Option<[u32; 3]>) -> PyResult<CoreTower> {
    match modulus {
        Some(ts) => {
            let (p, e) = boselab_core::fields::split_prime_power(q)
                .ok_or_else(|| PyValueError::new_err(format!("{q} is not a prime power")))?;
            CoreTower::new(p, e, ts).map_err(err)
        }
        None => CoreTower::for_order(q).map_err(err),
    }
}

/// GF(q) ⊂ GF(q³) ⊂ GF(q⁶). Elements are integers in the tower's raw
/// encoding; levels are "base", "cubic" or "sextic".
#[pyclass(frozen)]
struct FieldTower {
    inner: CoreTower,
}

#[pymethods]
impl FieldTower {
    #[new]
    #[pyo3(signature = (q, modulus=None))]
    fn new(q: u32, modulus: Option<[u32; 3]>) -> PyResult<Self> {
        Ok(FieldTower {
            inner: build_tower(q, modulus)?,
        })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn e(&self) -> u32 {
        self.inner.e()
    }

    #[getter]
    fn modulus(&self) -> String {
        self.inner.modulus_string()
    }

    #[getter]
    fn sextic_modulus(&self) -> String {
        self.inner.sextic_modulus_string()
    }

    fn order(&self, level_name: &str) -> PyResult<u32> {
        Ok(self.inner.order(level(level_name)?))
    }

    fn add(&self, level_name: &str, a: u32, b: u32) -> PyResult<u32> {
        let f = self.inner.field(level(level_name)?);
        self.check(&f, &[a, b])?;
        Ok(f.add(a, b))
    }

    fn mul(&self, level_name: &str, a: u32, b: u32) -> PyResult<u32> {
        let f = self.inner.field(level(level_name)?);
        self.check(&f, &[a, b])?;
        Ok(f.mul(a, b))
    }

    fn inv(&self, level_name: &str, a: u32) -> PyResult<u32> {
        let f = self.inner.field(level(level_name)?);
        self.check(&f, &[a])?;
        if a == 0 {
            return Err(err(boselab_core::Error::ZeroElement));
        }
        Ok(f.inv(a))
    }

    /// x^(q^k).
    fn frobenius(&self, level_name: &str, a: u32, k: u32) -> PyResult<u32> {
        let f = self.inner.field(level(level_name)?);
        self.check(&f, &[a])?;
        Ok(f.frob(a, k))
    }

    fn format(&self, level_name: &str, a: u32) -> PyResult<String> {
        let lv = level(level_name)?;
        self.check(&self.inner.field(lv), &[a])?;
        Ok(self.inner.format_raw(lv, a))
    }

    fn parse(&self, level_name: &str, text: &str) -> PyResult<u32> {
        Ok(self
            .inner
            .parse_elem(text, level(level_name)?)
            .map_err(err)?
            .raw())
    }

    fn descend(&self, level_name: &str, a: u32, target: &str) -> PyResult<Option<u32>> {
        let x = FieldElem::new(level(level_name)?, a);
        Ok(self
            .inner
            .try_descend(x, level(target)?)
            .ok()
            .map(|y| y.raw()))
    }

    fn __repr__(&self) -> String {
        format!(
            "FieldTower(q={}, modulus=\"{}\")",
            self.inner.q(),
            self.inner.modulus_string()
        )
    }
}

impl FieldTower {
    fn check(&self, f: &boselab_core::LevelField<'_>, xs: &[u32]) -> PyResult<()> {
        match xs.iter().find(|&&x| x >= f.size()) {
            Some(x) => Err(PyValueError::new_err(format!(
                "{x} is not an element of a field of order {}",
                f.size()
            ))),
            None => Ok(()),
        }
    }
}

/// The Bose frame of PG(2,q³) inside PG(8,q).
#[pyclass(frozen)]
struct BoseFrame {
    inner: CoreFrame,
}

#[pymethods]
impl BoseFrame {
    #[new]
    #[pyo3(signature = (q, modulus=None))]
    fn new(q: u32, modulus: Option<[u32; 3]>) -> PyResult<Self> {
        Ok(BoseFrame {
            inner: CoreFrame::new(build_tower(q, modulus)?),
        })
    }

    #[getter]
    fn tower(&self) -> FieldTower {
        FieldTower {
            inner: self.inner.tower().clone(),
        }
    }

    /// (a₀, a₁, a₂) as cubic-level raws.
    #[getter]
    fn constants(&self) -> [u32; 3] {
        self.inner.constants()
    }

    /// Echelon basis of the spread plane of the point (x, y, z) of PG(2,q³).
    fn bose_plane(&self, point: Vec<u32>) -> PyResult<Vec<Vec<u32>>> {
        let p = ProjPoint::new(self.inner.tower(), Level::Cubic, point).map_err(err)?;
        Ok(self.inner.plane_of(&p).basis().to_vec())
    }

    /// The point xA₀ + yA₁ + zA₂ of Γ, normalized.
    fn gamma_point(&self, point: Vec<u32>) -> PyResult<Vec<u32>> {
        let p = ProjPoint::new(self.inner.tower(), Level::Cubic, point).map_err(err)?;
        Ok(self.inner.gamma_point(&p).coords().to_vec())
    }

    fn spread_size(&self) -> usize {
        self.inner.spread().len()
    }

    /// The spread report as a JSON string.
    #[pyo3(signature = (cap=DEFAULT_CAP))]
    fn verify_spread(&self, cap: u64) -> PyResult<String> {
        let r = self.inner.verify_spread(cap).map_err(err)?;
        serde_json::to_string(&r).map_err(|e| PyValueError::new_err(e.to_string()))
    }
}

/// Expand a ternary form over GF(q³) into the three forms over GF(q) in
/// nine variables; returns their text encodings.
#[pyfunction]
#[pyo3(signature = (q, form, modulus=None))]
fn expand_form(q: u32, form: &str, modulus: Option<[u32; 3]>) -> PyResult<Vec<String>> {
    let t = build_tower(q, modulus)?;
    let f = HomogeneousForm::parse(&t, Level::Cubic, 3, form).map_err(err)?;
    let e = expand(&t, &f).map_err(err)?;
    Ok(e.parts.iter().map(|g| g.format(&t)).collect())
}

/// Run a named suite and return its report as a JSON string.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (name, q, seed=1, samples=10, modulus=None, form=None, cap=DEFAULT_CAP))]
fn run_suite(
    py: Python<'_>,
    name: &str,
    q: u32,
    seed: u64,
    samples: usize,
    modulus: Option<[u32; 3]>,
    form: Option<String>,
    cap: u64,
) -> PyResult<String> {
    let params = SuiteParams {
        q,
        modulus,
        seed,
        samples,
        cap,
        form,
    };
    let report = py.detach(|| run(name, &params)).map_err(err)?;
    Ok(report.to_json())
}

/// σ(y₀, y₁, y₂, y₃) on the canonical conic scroll, or None on its kernel.
#[pyfunction]
fn sigma(q: u32, y: [u32; 4]) -> PyResult<Option<Vec<u32>>> {
    let t = CoreTower::for_order(q).map_err(err)?;
    if y.iter().any(|&c| c >= q) {
        return Err(PyValueError::new_err("parameters must lie in GF(q)"));
    }
    match sigma_parametrization(&t, Level::Base, &y) {
        Ok(p) => Ok(Some(p.coords().to_vec())),
        Err(boselab_core::Error::KernelPoint) => Ok(None),
        Err(e) => Err(err(e)),
    }
}

/// Counts comparing the image of σ with the scroll, as a JSON string.
#[pyfunction]
fn sigma_counts(q: u32) -> PyResult<String> {
    let t = CoreTower::for_order(q).map_err(err)?;
    let s = sigma_summary(&t, DEFAULT_CAP).map_err(err)?;
    serde_json::to_string(&s).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn boselab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<FieldTower>()?;
    m.add_class::<BoseFrame>()?;
    m.add_function(wrap_pyfunction!(expand_form, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_counts, m)?)?;
    m.add("SUITES", boselab_core::SUITES.to_vec())?;
    Ok(())
}
