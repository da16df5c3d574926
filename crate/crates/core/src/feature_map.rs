//! Data-encoding circuits that map classical feature vectors to quantum
//! states.
//!
//! Three families are supported. With the Hadamard pre-layer enabled
//! (the default), one repetition expands to:
//!
//! * `Z`: H on every qubit, then RZ(x_j) on qubit j.
//! * `Zz`: the Z layer, then RZZ(x_j * x_k) on qubit pairs.
//! * `Pauli`: H on every qubit, then RX(x_j), RY(x_j), RZ(x_j) on qubit j,
//!   then RZX(x_j * x_k) entanglers.
//!
//! All rotations use the full-angle convention exp(-i x P); these circuits
//! carry data, not trainable parameters, so parameter-shift differentiation
//! never touches them. Pair selection is lexicographic: `FullPairs` takes
//! every j < k, `Linear` only adjacent pairs (j, j+1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{run_circuit, AngleConvention, Circuit, Gate, Statevector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMapKind {
    Z,
    Zz,
    Pauli,
}

impl FeatureMapKind {
    /// Name used in reports and output files.
    pub fn display_name(self) -> &'static str {
        match self {
            FeatureMapKind::Z => "ZFeatureMap",
            FeatureMapKind::Zz => "ZZFeatureMap",
            FeatureMapKind::Pauli => "PauliFeatureMap",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entanglement {
    FullPairs,
    Linear,
}

impl Entanglement {
    fn pairs(self, n_qubits: usize) -> Vec<(usize, usize)> {
        match self {
            Entanglement::FullPairs => {
                let mut out = Vec::new();
                for j in 0..n_qubits {
                    for k in (j + 1)..n_qubits {
                        out.push((j, k));
                    }
                }
                out
            }
            Entanglement::Linear => (0..n_qubits.saturating_sub(1))
                .map(|j| (j, j + 1))
                .collect(),
        }
    }
}

/// Fully describes an encoding circuit family; one feature per qubit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureMapConfig {
    pub kind: FeatureMapKind,
    pub n_qubits: usize,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_entanglement")]
    pub entanglement: Entanglement,
    #[serde(default = "default_hadamard_layer")]
    pub hadamard_layer: bool,
}

fn default_repetitions() -> usize {
    1
}

fn default_entanglement() -> Entanglement {
    Entanglement::FullPairs
}

fn default_hadamard_layer() -> bool {
    true
}

impl FeatureMapConfig {
    /// A single-repetition map with the Hadamard pre-layer and full pair
    /// entanglement.
    pub fn new(kind: FeatureMapKind, n_qubits: usize) -> Self {
        FeatureMapConfig {
            kind,
            n_qubits,
            repetitions: default_repetitions(),
            entanglement: default_entanglement(),
            hadamard_layer: default_hadamard_layer(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::ZeroQubits);
        }
        if self.repetitions == 0 {
            return Err(Error::invalid("repetitions", "must be at least 1"));
        }
        Ok(())
    }
}

/// Builds the encoding circuit for feature vector `x`.
///
/// `x` must have exactly `config.n_qubits` finite entries. The same
/// `(config, x)` always produces the same gate list.
pub fn build_feature_map(config: &FeatureMapConfig, x: &[f64]) -> Result<Circuit> {
    config.validate()?;
    if x.len() != config.n_qubits {
        return Err(Error::DimensionMismatch { expected: config.n_qubits, got: x.len() });
    }
    for &v in x {
        if !v.is_finite() {
            return Err(Error::NonFiniteAngle(v));
        }
    }

    let n = config.n_qubits;
    let full = AngleConvention::Full;
    let mut gates = Vec::new();
    for _ in 0..config.repetitions {
        if config.hadamard_layer {
            for q in 0..n {
                gates.push(Gate::H { target: q });
            }
        }
        match config.kind {
            FeatureMapKind::Z => {
                for q in 0..n {
                    gates.push(Gate::Rz { target: q, angle: x[q], convention: full });
                }
            }
            FeatureMapKind::Zz => {
                for q in 0..n {
                    gates.push(Gate::Rz { target: q, angle: x[q], convention: full });
                }
                for (j, k) in config.entanglement.pairs(n) {
                    gates.push(Gate::Rzz { a: j, b: k, angle: x[j] * x[k], convention: full });
                }
            }
            FeatureMapKind::Pauli => {
                for q in 0..n {
                    gates.push(Gate::Rx { target: q, angle: x[q], convention: full });
                    gates.push(Gate::Ry { target: q, angle: x[q], convention: full });
                    gates.push(Gate::Rz { target: q, angle: x[q], convention: full });
                }
                for (j, k) in config.entanglement.pairs(n) {
                    gates.push(Gate::Rzx {
                        z_qubit: j,
                        x_qubit: k,
                        angle: x[j] * x[k],
                        convention: full,
                    });
                }
            }
        }
    }
    Circuit::new(n, gates)
}

/// Runs the encoding circuit on |0...0⟩ and returns the encoded state.
pub fn encode(config: &FeatureMapConfig, x: &[f64]) -> Result<Statevector> {
    let circuit = build_feature_map(config, x)?;
    let initial = Statevector::zero(config.n_qubits)?;
    run_circuit(&circuit, &initial)
}
