//! Python bindings: `import iec_py`.
//!
//! Reports and benchmark results come back as plain dicts; models round-trip
//! through the same JSON the Rust crate writes.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use iec::benchmark::{self, BenchmarkConfig};
use iec::dataset::{self, FeatureSpec, SynthConfig};
use iec::{ann, ensemble, hddt, metrics, Matrix, TrainConfig, TreeConfig};

fn to_py(e: iec::Error) -> PyErr {
    match e {
        iec::Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

// Vec<u8> would convert to `bytes`; labels should come back as a list of ints.
fn label_list(labels: &[u8]) -> Vec<u32> {
    labels.iter().map(|&l| u32::from(l)).collect()
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    Matrix::from_rows(&rows).map_err(to_py)
}

/// Feature matrix with binary labels (1 = positive / minority class).
#[pyclass(name = "Dataset", module = "iec_py", frozen)]
pub struct PyDataset {
    inner: iec::Dataset,
}

#[pymethods]
impl PyDataset {
    /// Continuous features only; names default to x0, x1, ...
    #[new]
    #[pyo3(signature = (rows, labels, names=None))]
    fn new(rows: Vec<Vec<f64>>, labels: Vec<u8>, names: Option<Vec<String>>) -> PyResult<Self> {
        let features = matrix(rows)?;
        let names = names.unwrap_or_else(|| (0..features.ncols()).map(|j| format!("x{j}")).collect());
        let specs = names.into_iter().map(FeatureSpec::continuous).collect();
        let inner = iec::Dataset::new(specs, features, labels).map_err(to_py)?;
        Ok(PyDataset { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (path, label_col="class", positive="1", categorical=Vec::new()))]
    fn load_csv(path: &str, label_col: &str, positive: &str, categorical: Vec<String>) -> PyResult<Self> {
        let cats: Vec<&str> = categorical.iter().map(String::as_str).collect();
        let inner = dataset::load_csv(path, label_col, positive, &cats).map_err(to_py)?;
        Ok(PyDataset { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (n, informative=5, noise=5, minority=0.2, seed=0))]
    fn synth(n: usize, informative: usize, noise: usize, minority: f64, seed: u64) -> PyResult<Self> {
        let inner = SynthConfig::new(n, informative, noise, minority, seed)
            .generate()
            .map_err(to_py)?;
        Ok(PyDataset { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn labels(&self) -> Vec<u32> {
        label_list(self.inner.labels())
    }

    #[getter]
    fn feature_names(&self) -> Vec<String> {
        self.inner.specs().iter().map(|s| s.name.clone()).collect()
    }

    /// `(negatives, positives)`
    #[getter]
    fn class_counts(&self) -> (usize, usize) {
        self.inner.class_counts()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner.features().iter_rows().map(<[f64]>::to_vec).collect()
    }

    fn imbalance_cv(&self) -> PyResult<f64> {
        dataset::imbalance_cv(&self.inner).map_err(to_py)
    }

    fn is_imbalanced(&self) -> PyResult<bool> {
        dataset::is_imbalanced(&self.inner).map_err(to_py)
    }

    /// Stratified `(train, test)` split.
    #[pyo3(signature = (train_fraction=dataset::DEFAULT_TRAIN_FRACTION, seed=0))]
    fn split(&self, train_fraction: f64, seed: u64) -> PyResult<(PyDataset, PyDataset)> {
        let (train, test) = dataset::stratified_split(&self.inner, train_fraction, seed).map_err(to_py)?;
        Ok((PyDataset { inner: train }, PyDataset { inner: test }))
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        let (neg, pos) = self.inner.class_counts();
        format!("Dataset(n={}, p={}, neg={neg}, pos={pos})", self.inner.n(), self.inner.p())
    }
}

#[pyclass(name = "HddtModel", module = "iec_py", frozen)]
pub struct PyHddtModel {
    inner: hddt::HddtModel,
}

#[pymethods]
impl PyHddtModel {
    #[staticmethod]
    #[pyo3(signature = (data, min_leaf=1, max_depth=None))]
    fn fit(data: &PyDataset, min_leaf: usize, max_depth: Option<usize>) -> PyResult<Self> {
        let inner = hddt::grow_tree(&data.inner, TreeConfig { min_leaf, max_depth }).map_err(to_py)?;
        Ok(PyHddtModel { inner })
    }

    fn predict(&self, data: &PyDataset) -> PyResult<Vec<u32>> {
        self.inner.predict(&data.inner).map(|l| label_list(&l)).map_err(to_py)
    }

    fn predict_rows(&self, rows: Vec<Vec<f64>>) -> PyResult<Vec<u32>> {
        self.inner.predict_matrix(&matrix(rows)?).map(|l| label_list(&l)).map_err(to_py)
    }

    /// Feature indices used by the tree, most important first.
    fn select_features(&self) -> Vec<usize> {
        self.inner.select_features()
    }

    #[getter]
    fn importances(&self) -> Vec<f64> {
        self.inner.importances.clone()
    }

    #[getter]
    fn n_train(&self) -> usize {
        self.inner.n_train
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.root.depth()
    }

    #[getter]
    fn leaf_count(&self) -> usize {
        self.inner.root.leaf_count()
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = hddt::HddtModel::from_json(text).map_err(to_py)?;
        Ok(PyHddtModel { inner })
    }
}

/// Tree-selected features plus the tree's prediction, fed to a small network.
#[pyclass(name = "IecModel", module = "iec_py", frozen)]
pub struct PyIecModel {
    inner: ensemble::IecModel,
}

#[pymethods]
impl PyIecModel {
    #[staticmethod]
    #[pyo3(signature = (
        data, seed=0, epochs=2000, learning_rate=0.3, init_scale=0.5, min_leaf=1, max_depth=None
    ))]
    #[allow(clippy::too_many_arguments)]
    fn fit(
        py: Python<'_>,
        data: &PyDataset,
        seed: u64,
        epochs: usize,
        learning_rate: f64,
        init_scale: f64,
        min_leaf: usize,
        max_depth: Option<usize>,
    ) -> PyResult<Self> {
        let tree = TreeConfig { min_leaf, max_depth };
        let net = TrainConfig { epochs, learning_rate, seed, init_scale };
        let inner = py
            .detach(|| ensemble::fit(&data.inner, tree, &net))
            .map_err(to_py)?;
        Ok(PyIecModel { inner })
    }

    fn predict(&self, data: &PyDataset) -> PyResult<Vec<u32>> {
        self.inner.predict(&data.inner).map(|l| label_list(&l)).map_err(to_py)
    }

    fn predict_rows(&self, rows: Vec<Vec<f64>>) -> PyResult<Vec<u32>> {
        self.inner.predict_matrix(&matrix(rows)?).map(|l| label_list(&l)).map_err(to_py)
    }

    #[getter]
    fn selected_features(&self) -> Vec<usize> {
        self.inner.selected_features.clone()
    }

    #[getter]
    fn selected_feature_names(&self) -> Vec<String> {
        let specs = &self.inner.tree.specs;
        self.inner.selected_features.iter().map(|&f| specs[f].name.clone()).collect()
    }

    #[getter]
    fn d_m(&self) -> usize {
        self.inner.d_m
    }

    #[getter]
    fn hidden_count(&self) -> usize {
        self.inner.hidden_count()
    }

    #[getter]
    fn tree(&self) -> PyHddtModel {
        PyHddtModel { inner: self.inner.tree.clone() }
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = ensemble::IecModel::from_json(text).map_err(to_py)?;
        Ok(PyIecModel { inner })
    }
}

/// Hellinger score of a split given `(pos, neg)` counts per partition.
#[pyfunction]
fn hellinger_split_score(partition_counts: Vec<(usize, usize)>) -> PyResult<f64> {
    hddt::hellinger_split_score(&partition_counts).map_err(to_py)
}

#[pyfunction]
fn hidden_neuron_count(n: usize, d_m: usize) -> PyResult<usize> {
    ann::hidden_neuron_count(n, d_m).map_err(to_py)
}

/// Confusion matrix, metrics report and zero-denominator flags as a dict.
#[pyfunction]
fn evaluate<'py>(py: Python<'py>, predicted: Vec<u8>, actual: Vec<u8>) -> PyResult<Bound<'py, PyAny>> {
    #[derive(Serialize)]
    struct Evaluation {
        confusion: metrics::ConfusionMatrix,
        report: metrics::MetricsReport,
        undefined: Vec<&'static str>,
    }
    let cm = metrics::confusion(&predicted, &actual).map_err(to_py)?;
    let eval = Evaluation {
        confusion: cm,
        report: metrics::report(&cm),
        undefined: cm.undefined_metrics(),
    };
    to_dict(py, &eval)
}

/// ANN-only, HDDT and IEC over repeated stratified splits.
///
/// Returns `{"folds": [...], "summary": [...], "table": str}`.
#[pyfunction]
#[pyo3(signature = (
    data, repetitions=5, train_fraction=0.7, seed=0, epochs=2000, learning_rate=0.3,
    init_scale=0.5, min_leaf=1, max_depth=None
))]
#[allow(clippy::too_many_arguments)]
fn run_benchmark<'py>(
    py: Python<'py>,
    data: &PyDataset,
    repetitions: usize,
    train_fraction: f64,
    seed: u64,
    epochs: usize,
    learning_rate: f64,
    init_scale: f64,
    min_leaf: usize,
    max_depth: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let config = BenchmarkConfig {
        repetitions,
        train_fraction,
        seed,
        tree: TreeConfig { min_leaf, max_depth },
        net: TrainConfig { epochs, learning_rate, seed, init_scale },
    };
    let result = py
        .detach(|| benchmark::run_benchmark(&data.inner, &config))
        .map_err(to_py)?;
    let out = to_dict(py, &result)?;
    out.set_item("table", result.table())?;
    Ok(out)
}

#[pymodule]
pub fn iec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_class::<PyHddtModel>()?;
    m.add_class::<PyIecModel>()?;
    m.add_function(wrap_pyfunction!(hellinger_split_score, m)?)?;
    m.add_function(wrap_pyfunction!(hidden_neuron_count, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(run_benchmark, m)?)?;
    Ok(())
}
