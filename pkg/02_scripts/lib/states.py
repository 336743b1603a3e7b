"""
State types and constructors.

Families:
    - Bell pair and Werner-type mixtures
    - pseudo-pure mixtures tagged by orthogonal local flags
    - one-way maximally correlated (1-MC) states built from a spec
    - the two-angle example family |psi> = (|000> + |theta 1 phi>)/sqrt(2)
    - seeded random pure and mixed states
and the canonical decompositions used by the measures: purification,
Schmidt decomposition, PPT test and single-subsystem dephasing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from lib.errors import ValidationError
from lib.linalg import (
    DimSignature, as_hermitian, partial_trace, partial_transpose,
    permute_vector, tensor_product,
)
from lib.schema import ANCILLA_LABELS, FLAG_LABEL
from lib.thresholds import (
    CUTOFFS, MAX_TOTAL_DIM, VALIDATION_TOLERANCES, VERDICT_TOLERANCES,
    ppt_decides_separability,
)

SeedLike = int | Sequence[int] | None


# ============================================================
# STATE TYPES
# ============================================================

@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector on a labelled tensor product."""
    amplitudes: np.ndarray
    sig: DimSignature

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.sig.total:
            raise ValidationError(
                f"State has {amps.size} amplitudes but signature {self.sig.dims} "
                f"needs {self.sig.total}")
        norm = float(np.linalg.norm(amps))
        tol = VALIDATION_TOLERANCES['normalization']
        if abs(norm - 1.0) > tol:
            raise ValidationError(f"State norm {norm!r} deviates from 1 by more than {tol:g}")
        amps.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amps)

    @classmethod
    def normalized(cls, amplitudes, sig: DimSignature) -> 'PureState':
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValidationError("Cannot normalize the zero vector")
        return cls(amps / norm, sig)

    def density(self) -> 'DensityMatrix':
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.sig)

    def reduce(self, keep: Sequence[str]) -> 'DensityMatrix':
        return self.density().reduce(keep)

    def overlap(self, other: 'PureState') -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Positive unit-trace Hermitian operator on a labelled tensor product."""
    matrix: np.ndarray
    sig: DimSignature
    eigenvalues: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        self.sig.check_operator(matrix)
        if self.sig.total > MAX_TOTAL_DIM:
            raise ValidationError(
                f"Total dimension {self.sig.total} exceeds supported {MAX_TOTAL_DIM}")
        matrix = as_hermitian(matrix)

        trace = float(np.trace(matrix).real)
        tol = VALIDATION_TOLERANCES['trace']
        if abs(trace - 1.0) > tol:
            raise ValidationError(f"Trace {trace!r} deviates from 1 by more than {tol:g}")

        evals = np.linalg.eigvalsh(matrix)
        tol = VALIDATION_TOLERANCES['positivity']
        if evals[0] < -tol:
            raise ValidationError(
                f"Matrix is not positive: smallest eigenvalue {evals[0]:.6g} < -{tol:g}")
        matrix.setflags(write=False)
        evals.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'eigenvalues', evals)

    @classmethod
    def maximally_mixed(cls, sig: DimSignature) -> 'DensityMatrix':
        return cls(np.eye(sig.total) / sig.total, sig)

    @property
    def dim(self) -> int:
        return self.sig.total

    @property
    def purity(self) -> float:
        return float(np.sum(np.clip(self.eigenvalues, 0.0, None) ** 2))

    @property
    def is_pure(self) -> bool:
        return 1.0 - self.purity <= CUTOFFS['pure_purity']

    @property
    def rank(self) -> int:
        return int(np.sum(self.eigenvalues > CUTOFFS['rank']))

    def reduce(self, keep: Sequence[str]) -> 'DensityMatrix':
        keep = list(keep)
        return DensityMatrix(partial_trace(self.matrix, self.sig, keep), self.sig.restrict(keep))


# ============================================================
# SPECS
# ============================================================

def _as_state_list(states, name: str) -> list[np.ndarray]:
    out = []
    tol = VALIDATION_TOLERANCES['normalization']
    for i, s in enumerate(states):
        v = np.asarray(s.amplitudes if isinstance(s, PureState) else s, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > tol:
            raise ValidationError(f"{name}[{i}] has norm {norm!r}, expected 1 within {tol:g}")
        out.append(v)
    if out and len({v.size for v in out}) != 1:
        raise ValidationError(f"{name} vectors have mixed dimensions {[v.size for v in out]}")
    return out


@dataclass(frozen=True, eq=False)
class OneWayMcSpec:
    """
    Spec of a one-way maximally correlated state
    |psi_abc> = sum_i alpha_i |a_i>|i_b>|c_i>.
    """
    alphas: np.ndarray
    a_states: Tuple[np.ndarray, ...]
    c_states: Tuple[np.ndarray, ...]

    def __post_init__(self):
        alphas = np.asarray(self.alphas, dtype=complex).reshape(-1)
        a_states = _as_state_list(self.a_states, 'a_states')
        c_states = _as_state_list(self.c_states, 'c_states')
        n = alphas.size
        if n == 0:
            raise ValidationError("1-MC spec needs at least one term")
        if len(a_states) != n or len(c_states) != n:
            raise ValidationError(
                f"1-MC spec has {n} alphas, {len(a_states)} a_states, {len(c_states)} c_states")
        norm = float(np.sum(np.abs(alphas) ** 2))
        tol = VALIDATION_TOLERANCES['normalization']
        if abs(norm - 1.0) > tol:
            raise ValidationError(f"sum |alpha_i|^2 = {norm!r} deviates from 1 by more than {tol:g}")
        object.__setattr__(self, 'alphas', alphas)
        object.__setattr__(self, 'a_states', tuple(a_states))
        object.__setattr__(self, 'c_states', tuple(c_states))

    @property
    def n_terms(self) -> int:
        return self.alphas.size

    @property
    def a_dim(self) -> int:
        return self.a_states[0].size

    @property
    def c_dim(self) -> int:
        return self.c_states[0].size

    @property
    def has_repeated_a_states(self) -> bool:
        """True when two a_states coincide up to phase (degenerate 1-MC)."""
        tol = VERDICT_TOLERANCES['repeated_state']
        for i in range(self.n_terms):
            for j in range(i + 1, self.n_terms):
                if 1.0 - abs(np.vdot(self.a_states[i], self.a_states[j])) <= tol:
                    return True
        return False


@dataclass(frozen=True)
class ExampleFamilyParams:
    """Angles of |psi_abc> = (|000> + |theta 1 phi>)/sqrt(2), both in [0, pi/2]."""
    theta: float
    phi: float

    def __post_init__(self):
        for name in ('theta', 'phi'):
            value = float(getattr(self, name))
            if not (-1e-12 <= value <= math.pi / 2 + 1e-12):
                raise ValidationError(f"{name} = {value!r} outside [0, pi/2]")
            object.__setattr__(self, name, min(max(value, 0.0), math.pi / 2))

    def to_spec(self) -> OneWayMcSpec:
        s = 1 / math.sqrt(2)
        return OneWayMcSpec(
            alphas=np.array([s, s]),
            a_states=(np.array([1.0, 0.0]), qubit_angle_state(self.theta)),
            c_states=(np.array([1.0, 0.0]), qubit_angle_state(self.phi)),
        )


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """psi = sum_k coefficients[k] * left_vectors[k] (x) right_vectors[k] in (left, right) order."""
    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    left_sig: DimSignature
    right_sig: DimSignature
    sig: DimSignature

    @property
    def rank(self) -> int:
        return self.coefficients.size

    def reconstruct(self) -> PureState:
        """Rebuild the state in the original label order."""
        vec = np.einsum('k,ki,kj->ij', self.coefficients, self.left_vectors,
                        self.right_vectors).reshape(-1)
        split_sig = DimSignature(self.left_sig.dims + self.right_sig.dims,
                                 self.left_sig.labels + self.right_sig.labels)
        vec, _ = permute_vector(vec, split_sig, self.sig.labels)
        return PureState.normalized(vec, self.sig)


@dataclass(frozen=True)
class PptVerdict:
    ppt: bool
    min_eigenvalue: float
    decides_separability: bool

    @property
    def separable(self) -> Optional[bool]:
        """Separability verdict, or None where PPT is not decisive and the state is PPT."""
        if not self.ppt:
            return False
        return True if self.decides_separability else None


# ============================================================
# CONSTRUCTORS
# ============================================================

def qubit_angle_state(angle: float) -> np.ndarray:
    """|angle> = cos(angle)|0> + sin(angle)|1>."""
    return np.array([math.cos(angle), math.sin(angle)], dtype=complex)


def bell_state(labels: Tuple[str, str] = ('a', 'b')) -> PureState:
    """(|00> + |11>)/sqrt(2)."""
    s = 1 / math.sqrt(2)
    return PureState(np.array([s, 0, 0, s]), DimSignature((2, 2), labels))


def make_werner(p: float, labels: Tuple[str, str] = ('a', 'b')) -> DensityMatrix:
    """p |Phi><Phi| + (1 - p) I/4."""
    if not (-1 / 3 - 1e-12 <= p <= 1 + 1e-12):
        raise ValidationError(f"Werner weight p = {p!r} outside [-1/3, 1]")
    phi = bell_state(labels)
    return DensityMatrix(p * phi.density().matrix + (1 - p) * np.eye(4) / 4, phi.sig)


def make_pseudo_pure(pairs: Sequence[Tuple[float, PureState]],
                     flag_dim: Optional[int] = None,
                     flag_label: str = FLAG_LABEL) -> DensityMatrix:
    """
    Mixture sum_i p_i |phi_i><phi_i| (x) |i><i| with computational-basis flags.

    Args:
        pairs: (probability, pure state) pairs on a common signature
        flag_dim: Flag dimension, defaults to the number of pairs
        flag_label: Label of the flag subsystem

    Returns:
        DensityMatrix on the pair signature extended by the flag
    """
    if not pairs:
        raise ValidationError("Pseudo-pure mixture needs at least one pair")
    probs = np.array([float(p) for p, _ in pairs])
    tol = VALIDATION_TOLERANCES['probability_sum']
    if np.any(probs <= 0):
        raise ValidationError(f"Probabilities must be positive, got {probs.tolist()}")
    if abs(probs.sum() - 1.0) > tol:
        raise ValidationError(f"Probabilities sum to {probs.sum()!r}, expected 1 within {tol:g}")

    sig = pairs[0][1].sig
    if any(state.sig != sig for _, state in pairs):
        raise ValidationError("All pseudo-pure members must share one signature")
    flag_dim = len(pairs) if flag_dim is None else int(flag_dim)
    if flag_dim < len(pairs):
        raise ValidationError(f"flag_dim {flag_dim} < number of pairs {len(pairs)}")
    if flag_label in sig.labels:
        raise ValidationError(f"Flag label '{flag_label}' already used in {sig.labels}")

    matrix = np.zeros((sig.total * flag_dim,) * 2, dtype=complex)
    for i, (p, state) in enumerate(pairs):
        flag = np.zeros((flag_dim, flag_dim))
        flag[i, i] = 1.0
        matrix += p * tensor_product(state.density().matrix, flag)
    return DensityMatrix(matrix, sig.append(flag_dim, flag_label))


def make_one_way_mc(spec: OneWayMcSpec,
                    labels: Tuple[str, str, str] = ('a', 'b', 'c')
                    ) -> Tuple[PureState, DensityMatrix]:
    """
    Build sum_i alpha_i |a_i>|i_b>|c_i> and its reduced state on (a, b).

    Returns:
        (pure state on a, b, c; density matrix on a, b)
    """
    n = spec.n_terms
    vec = np.zeros(spec.a_dim * n * spec.c_dim, dtype=complex)
    for i in range(n):
        basis = np.zeros(n)
        basis[i] = 1.0
        vec += spec.alphas[i] * tensor_product(spec.a_states[i], basis, spec.c_states[i])
    sig = DimSignature((spec.a_dim, n, spec.c_dim), labels)
    psi = PureState(vec, sig)
    return psi, psi.reduce(labels[:2])


def example_family(params: ExampleFamilyParams
                   ) -> Tuple[PureState, DensityMatrix, DensityMatrix]:
    """
    The two-angle family on three qubits.

    Returns:
        (|psi_abc>, sigma_ab, rho_ac)
    """
    psi, sigma_ab = make_one_way_mc(params.to_spec())
    return psi, sigma_ab, psi.reduce(('a', 'c'))


def next_free_label(sig: DimSignature, candidates: str = ANCILLA_LABELS) -> str:
    for label in candidates:
        if label not in sig.labels:
            return label
    raise ValidationError(f"No free ancilla label left for {sig.labels}")


def purify(rho: DensityMatrix, label: Optional[str] = None) -> PureState:
    """
    Purify rho onto an ancilla of dimension rank(rho).

    Eigenvalues at or below the rank cutoff are dropped and the vector is
    renormalized, so the reduced state matches rho within that cutoff.
    """
    label = next_free_label(rho.sig) if label is None else label
    evals, evecs = np.linalg.eigh(rho.matrix)
    support = evals > CUTOFFS['rank']
    evals, evecs = evals[support], evecs[:, support]
    rank = evals.size
    # sum_k sqrt(l_k) |v_k> (x) |k>
    vec = (evecs * np.sqrt(evals)).reshape(-1)
    return PureState.normalized(vec, rho.sig.append(rank, label))


def schmidt_decompose(psi: PureState, left: Sequence[str]) -> SchmidtDecomposition:
    """
    Schmidt decomposition across left | rest.

    Coefficients are real, non-increasing and above the Schmidt cutoff;
    phases are carried by the right vectors.
    """
    left_idx = psi.sig.indices(left)
    if not left_idx or len(left_idx) == len(psi.sig):
        raise ValidationError(
            f"Bipartition must be a non-trivial proper subset of {list(psi.sig.labels)}, "
            f"got {list(left)}")
    left_sig = psi.sig.restrict(left)
    right_sig = psi.sig.restrict(psi.sig.others(left))
    vec, _ = permute_vector(psi.amplitudes, psi.sig, left_sig.labels + right_sig.labels)

    u, s, vh = np.linalg.svd(vec.reshape(left_sig.total, right_sig.total), full_matrices=False)
    keep = s > CUTOFFS['schmidt']
    return SchmidtDecomposition(
        coefficients=s[keep],
        left_vectors=u[:, keep].T,
        right_vectors=vh[keep],
        left_sig=left_sig,
        right_sig=right_sig,
        sig=psi.sig,
    )


def random_pure_state(sig: DimSignature, seed: SeedLike = None) -> PureState:
    """Normalized standard complex Gaussian vector (unitarily invariant)."""
    rng = np.random.default_rng(seed)
    vec = rng.standard_normal(sig.total) + 1j * rng.standard_normal(sig.total)
    return PureState.normalized(vec, sig)


def random_density_matrix(sig: DimSignature, rank: Optional[int] = None,
                          seed: SeedLike = None) -> DensityMatrix:
    """Reduced state of a random pure state on sig (x) C^rank."""
    rank = sig.total if rank is None else int(rank)
    if not 1 <= rank <= sig.total:
        raise ValidationError(f"rank must be in [1, {sig.total}], got {rank}")
    env = next_free_label(sig, '_' + ANCILLA_LABELS)
    psi = random_pure_state(sig.append(rank, env), seed)
    return psi.reduce(sig.labels)


def is_ppt(rho: DensityMatrix, subsystem: Optional[str] = None) -> PptVerdict:
    """
    Positive-partial-transpose test on a bipartite state.

    Args:
        rho: Bipartite density matrix
        subsystem: Label to transpose, defaults to the second one

    Returns:
        PptVerdict; decides separability only for 2x2 and 2x3 shapes
    """
    if len(rho.sig) != 2:
        raise ValidationError(
            f"PPT test needs a bipartite signature, got labels {list(rho.sig.labels)}")
    subsystem = rho.sig.labels[1] if subsystem is None else subsystem
    pt = partial_transpose(rho.matrix, rho.sig, subsystem)
    min_eig = float(np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0])
    return PptVerdict(
        ppt=min_eig >= -VERDICT_TOLERANCES['ppt'],
        min_eigenvalue=min_eig,
        decides_separability=ppt_decides_separability(rho.sig.dims),
    )


def dephase(rho: DensityMatrix, label: str) -> DensityMatrix:
    """Remove coherences of one subsystem in its computational basis."""
    k = rho.sig.index(label)
    n = len(rho.sig)
    d = rho.sig.dims[k]
    shape = [1] * (2 * n)
    shape[k] = shape[n + k] = d
    mask = np.eye(d).reshape(shape)
    tensor = rho.matrix.reshape(rho.sig.dims + rho.sig.dims) * mask
    return DensityMatrix(tensor.reshape(rho.dim, rho.dim), rho.sig)
