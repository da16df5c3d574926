//! Quantum-kernel and variational classifiers for genomic sequences, on a
//! dense statevector simulator.
//!
//! The crate covers the full experiment chain:
//!
//! 1. [`pipeline`] — sequence ingestion, k-mer vectorization, PCA to four
//!    dimensions, angle scaling, stratified splitting.
//! 2. [`feature_map`] — three data-encoding circuit families (Z, ZZ,
//!    Pauli) over one qubit per feature.
//! 3. [`kernel`] — fidelity kernels K(x, y) = |⟨φ(x)|φ(y)⟩|² and Gram
//!    matrix assembly.
//! 4. [`qsvc`] / [`pegasos`] — kernel SVM training via SMO and via the
//!    Pegasos subgradient method, including a certificate check of the
//!    Pegasos regret bound.
//! 5. [`variational`] — trainable circuit classifiers (one- and
//!    three-layer presets) optimized by parameter-shift gradient descent.
//! 6. [`metrics`] — confusion statistics and AUROC.
//!
//! Everything is deterministic given explicit seeds; no global RNG state.

pub mod error;
pub mod feature_map;
pub mod feature_matrix;
pub mod kernel;
pub mod linalg;
pub mod metrics;
pub mod pegasos;
pub mod pipeline;
pub mod qsvc;
pub mod statevector;
pub mod variational;

pub use error::{Error, Result};
pub use feature_map::{
    build_feature_map, encode, Entanglement, FeatureMapConfig, FeatureMapKind,
};
pub use feature_matrix::FeatureMatrix;
pub use kernel::{cross_gram, gram_matrix, kernel_entry, KernelMatrix};
pub use metrics::{auroc, confusion, metrics, ConfusionCounts, MetricsReport};
pub use pegasos::{
    pegasos_objective, train_pegasos, verify_pegasos_bound, PegasosBoundReport, PegasosModel,
    PegasosParams,
};
pub use pipeline::{
    load_dataset, load_sequences_csv, prepare, transform_new, DatasetFormat, PipelineConfig,
    PreparedData, RawDataset,
};
pub use qsvc::{dual_objective, train_qsvc, QsvcModel, QsvcParams};
pub use statevector::{
    apply_gate, expectation_parity_z, inner_product, run_circuit, AngleConvention, Circuit,
    Gate, Statevector, MAX_QUBITS,
};
pub use variational::{
    build_ansatz, gradient_variance_probe, parameter_shift_gradient, squared_loss,
    train_variational, variational_predict, AnsatzConfig, Preset, TrainParams,
    VariationalModel,
};
