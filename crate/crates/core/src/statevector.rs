//! Dense statevector simulator.
//!
//! States are stored as `2^n` complex amplitudes in little-endian order:
//! qubit 0 is the least-significant bit of the basis index, so `|q1 q0⟩ = |01⟩`
//! lives at index 1. Gates are applied by iterating over amplitude pairs with
//! a stride of `1 << target` rather than by building full matrices, which
//! keeps a single-qubit gate at O(2^n) work.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on simulated register width. 2^12 amplitudes keeps every
/// operation in this crate comfortably in cache at desk scale.
pub const MAX_QUBITS: usize = 12;

/// Interpretation of the `angle` carried by a rotation gate.
///
/// `Full` means the gate is exp(-i * angle * P) for Pauli generator P, the
/// convention used by the data-encoding circuits. `Half` means
/// exp(-i * angle/2 * P), the textbook convention for trainable rotations;
/// the parameter-shift rule with shifts of ±π/2 is exact only for `Half`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleConvention {
    Full,
    Half,
}

impl AngleConvention {
    /// The φ in exp(-i φ P) actually applied for a stored angle.
    pub fn effective(self, angle: f64) -> f64 {
        match self {
            AngleConvention::Full => angle,
            AngleConvention::Half => 0.5 * angle,
        }
    }
}

/// A single gate instruction. Qubit indices refer to little-endian positions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    H { target: usize },
    Rx { target: usize, angle: f64, convention: AngleConvention },
    Ry { target: usize, angle: f64, convention: AngleConvention },
    Rz { target: usize, angle: f64, convention: AngleConvention },
    Cnot { control: usize, target: usize },
    Cz { a: usize, b: usize },
    /// exp(-i φ Z⊗Z) on the qubit pair (a, b).
    Rzz { a: usize, b: usize, angle: f64, convention: AngleConvention },
    /// exp(-i φ Z⊗X): Z acts on `z_qubit`, X on `x_qubit`.
    Rzx { z_qubit: usize, x_qubit: usize, angle: f64, convention: AngleConvention },
}

impl Gate {
    /// Qubits the gate acts on, in declaration order.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::H { target }
            | Gate::Rx { target, .. }
            | Gate::Ry { target, .. }
            | Gate::Rz { target, .. } => vec![target],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz { a, b } => vec![a, b],
            Gate::Rzz { a, b, .. } => vec![a, b],
            Gate::Rzx { z_qubit, x_qubit, .. } => vec![z_qubit, x_qubit],
        }
    }

    /// Rotation angle as stored, if the gate has one.
    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx { angle, .. }
            | Gate::Ry { angle, .. }
            | Gate::Rz { angle, .. }
            | Gate::Rzz { angle, .. }
            | Gate::Rzx { angle, .. } => Some(angle),
            _ => None,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let targets = self.targets();
        for &q in &targets {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::DuplicateTargets(targets[0]));
        }
        if let Some(angle) = self.angle() {
            if !angle.is_finite() {
                return Err(Error::NonFiniteAngle(angle));
            }
        }
        Ok(())
    }
}

/// An ordered gate list over a fixed register width. Gates are validated at
/// construction, so a `Circuit` can always be executed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::ZeroQubits);
        }
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { requested: n_qubits, max: MAX_QUBITS });
        }
        for gate in &gates {
            gate.validate(n_qubits)?;
        }
        Ok(Circuit { n_qubits, gates })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

/// A normalized pure state of `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// |0...0⟩ on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::ZeroQubits);
        }
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { requested: n_qubits, max: MAX_QUBITS });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amplitudes })
    }

    /// Wraps raw amplitudes. The vector must have length 2^n and unit norm
    /// within 1e-12.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::ZeroQubits);
        }
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { requested: n_qubits, max: MAX_QUBITS });
        }
        let expected = 1usize << n_qubits;
        if amplitudes.len() != expected {
            return Err(Error::BadAmplitudeCount { expected, got: amplitudes.len() });
        }
        let state = Statevector { n_qubits, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn apply_in_place(&mut self, gate: &Gate) {
        match *gate {
            Gate::H { target } => {
                let f = std::f64::consts::FRAC_1_SQRT_2;
                self.map_pairs(target, |a0, a1| (f * (a0 + a1), f * (a0 - a1)));
            }
            Gate::Rx { target, angle, convention } => {
                let phi = convention.effective(angle);
                let (c, s) = (phi.cos(), phi.sin());
                let ms = Complex64::new(0.0, -s);
                self.map_pairs(target, |a0, a1| (c * a0 + ms * a1, ms * a0 + c * a1));
            }
            Gate::Ry { target, angle, convention } => {
                let phi = convention.effective(angle);
                let (c, s) = (phi.cos(), phi.sin());
                self.map_pairs(target, |a0, a1| (c * a0 - s * a1, s * a0 + c * a1));
            }
            Gate::Rz { target, angle, convention } => {
                let phi = convention.effective(angle);
                let lo = Complex64::from_polar(1.0, -phi);
                let hi = Complex64::from_polar(1.0, phi);
                let mask = 1usize << target;
                for (idx, amp) in self.amplitudes.iter_mut().enumerate() {
                    *amp *= if idx & mask == 0 { lo } else { hi };
                }
            }
            Gate::Cnot { control, target } => {
                let cmask = 1usize << control;
                let tmask = 1usize << target;
                for idx in 0..self.amplitudes.len() {
                    if idx & cmask != 0 && idx & tmask == 0 {
                        self.amplitudes.swap(idx, idx | tmask);
                    }
                }
            }
            Gate::Cz { a, b } => {
                let mask = (1usize << a) | (1usize << b);
                for (idx, amp) in self.amplitudes.iter_mut().enumerate() {
                    if idx & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Rzz { a, b, angle, convention } => {
                let phi = convention.effective(angle);
                let same = Complex64::from_polar(1.0, -phi);
                let diff = Complex64::from_polar(1.0, phi);
                let amask = 1usize << a;
                let bmask = 1usize << b;
                for (idx, amp) in self.amplitudes.iter_mut().enumerate() {
                    let parity_equal = (idx & amask == 0) == (idx & bmask == 0);
                    *amp *= if parity_equal { same } else { diff };
                }
            }
            Gate::Rzx { z_qubit, x_qubit, angle, convention } => {
                // exp(-i φ Z⊗X)|z,x⟩ = cos φ |z,x⟩ - i sin φ (-1)^z |z,x̄⟩.
                let phi = convention.effective(angle);
                let (c, s) = (phi.cos(), phi.sin());
                let zmask = 1usize << z_qubit;
                let xmask = 1usize << x_qubit;
                for idx in 0..self.amplitudes.len() {
                    if idx & xmask != 0 {
                        continue;
                    }
                    let pair = idx | xmask;
                    let sign = if idx & zmask == 0 { 1.0 } else { -1.0 };
                    let m = Complex64::new(0.0, -sign * s);
                    let a0 = self.amplitudes[idx];
                    let a1 = self.amplitudes[pair];
                    self.amplitudes[idx] = c * a0 + m * a1;
                    self.amplitudes[pair] = m * a0 + c * a1;
                }
            }
        }
    }

    /// Applies a 2x2 update to every (bit=0, bit=1) amplitude pair of
    /// `target`, visiting pairs in blocks of `2 * step` as in any dense
    /// statevector kernel.
    fn map_pairs<F>(&mut self, target: usize, f: F)
    where
        F: Fn(Complex64, Complex64) -> (Complex64, Complex64),
    {
        let step = 1usize << target;
        let len = self.amplitudes.len();
        let mut base = 0;
        while base < len {
            for offset in 0..step {
                let i = base + offset;
                let j = i | step;
                let (new_i, new_j) = f(self.amplitudes[i], self.amplitudes[j]);
                self.amplitudes[i] = new_i;
                self.amplitudes[j] = new_j;
            }
            base += 2 * step;
        }
    }
}

/// Returns a new state with `gate` applied. The input is unchanged.
pub fn apply_gate(state: &Statevector, gate: &Gate) -> Result<Statevector> {
    gate.validate(state.n_qubits)?;
    let mut next = state.clone();
    next.apply_in_place(gate);
    Ok(next)
}

/// Runs every gate of `circuit` in order on `initial`.
pub fn run_circuit(circuit: &Circuit, initial: &Statevector) -> Result<Statevector> {
    if circuit.n_qubits != initial.n_qubits {
        return Err(Error::QubitCountMismatch {
            left: circuit.n_qubits,
            right: initial.n_qubits,
        });
    }
    let mut state = initial.clone();
    for gate in &circuit.gates {
        state.apply_in_place(gate);
    }
    Ok(state)
}

/// ⟨a|b⟩ = Σ conj(a_i) b_i. Both states must have the same width.
pub fn inner_product(a: &Statevector, b: &Statevector) -> Result<Complex64> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::QubitCountMismatch { left: a.n_qubits, right: b.n_qubits });
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Expectation of the parity observable Z⊗Z⊗...⊗Z:
/// Σ_b (-1)^popcount(b) |amp_b|².
pub fn expectation_parity_z(state: &Statevector) -> f64 {
    state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(idx, amp)| {
            let sign = if (idx.count_ones() & 1) == 0 { 1.0 } else { -1.0 };
            sign * amp.norm_sqr()
        })
        .sum()
}
