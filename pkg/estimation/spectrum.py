"""
Spectral models

Builds the periodic transverse-field Ising Hamiltonian, its dense
eigendecomposition, the eigenphases of U = exp(iπH / (4‖H‖₂)) and initial
states with a prescribed overlap p0 on a target eigenstate. A finished
``SpectralDecomposition`` is the whole quantum content of a run.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, NamedTuple, Optional, Sequence, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sparse

from estimation.angle import reference_angle
from utils.cache_manager import cached_spectrum
from utils.exceptions import ExportError, InvalidArgumentError, NumericError
from utils.logging_config import log_performance

logger = logging.getLogger(__name__)

MIN_SITES = 2
MAX_SITES = 12
SYMMETRY_ATOL = 1e-12
WEIGHT_ATOL = 1e-12
EIGEN_RTOL = 1e-9

_SIGMA_X = sparse.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
_SIGMA_Z = sparse.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))
_IDENTITY = sparse.identity(2, format="csr")


class ResidualPolicy(str, Enum):
    """How the weight 1 - p0 is spread over the non-target eigenstates."""
    UNIFORM = "uniform"
    RANDOM = "random"
    SINGLE = "single"


@dataclass(frozen=True)
class HamiltonianModel:
    sites: int
    coupling: float
    matrix: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        dim = 1 << self.sites
        if self.matrix.shape != (dim, dim):
            raise InvalidArgumentError(f"matrix must be {dim}x{dim}, got {self.matrix.shape}")
        if not np.allclose(self.matrix, self.matrix.T, rtol=0.0, atol=SYMMETRY_ATOL):
            raise InvalidArgumentError("Hamiltonian matrix is not symmetric")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


class Eigensystem(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True, eq=False)
class SpectralModel:
    """Eigenvalues of H together with ‖H‖₂ and the eigenphases of U."""
    eigenvalues: np.ndarray = field(repr=False)
    norm: float
    phases: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("eigenvalues", "phases"):
            values = np.array(getattr(self, name), dtype=np.float64)
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @property
    def ground_index(self) -> int:
        return int(np.argmin(self.eigenvalues))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """
    Eigenphase/weight pairs of an initial state.

    Phases are stored as representatives in [-π, π); ``weights`` sum to one
    and ``weights[target_index]`` is the overlap p0.
    """
    phases: np.ndarray
    weights: np.ndarray
    target_index: int = 0

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=np.float64).reshape(-1)
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if phases.size == 0:
            raise InvalidArgumentError("spectral decomposition needs at least one phase")
        if phases.shape != weights.shape:
            raise InvalidArgumentError(
                f"phases and weights differ in length ({phases.size} vs {weights.size})")
        if not np.all(np.isfinite(phases)):
            raise InvalidArgumentError("phases must be finite")
        if np.any(weights < 0):
            raise InvalidArgumentError("weights must be nonnegative")
        if abs(weights.sum() - 1.0) > WEIGHT_ATOL:
            raise InvalidArgumentError(f"weights must sum to 1, got {weights.sum()!r}")
        if not 0 <= self.target_index < phases.size:
            raise InvalidArgumentError(f"target_index {self.target_index} out of range")

        in_range = (phases >= -math.pi) & (phases < math.pi)
        phases = np.array([p if ok else reference_angle(p) for p, ok in zip(phases, in_range)])
        phases.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "target_index", int(self.target_index))

    @property
    def p0(self) -> float:
        return float(self.weights[self.target_index])

    @property
    def target_phase(self) -> float:
        return float(self.phases[self.target_index])

    def __len__(self) -> int:
        return self.phases.size

    def to_dict(self) -> Dict[str, object]:
        return {
            "phases": [float(p) for p in self.phases],
            "weights": [float(w) for w in self.weights],
            "target_index": self.target_index,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "SpectralDecomposition":
        try:
            return cls(
                phases=np.asarray(data["phases"], dtype=np.float64),
                weights=np.asarray(data["weights"], dtype=np.float64),
                target_index=int(data.get("target_index", 0)),
            )
        except KeyError as e:
            raise InvalidArgumentError(f"spectrum document is missing key {e}") from e

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SpectralDecomposition":
        return cls.from_dict(json.loads(text))


def build_tfim(L: int, g: float) -> HamiltonianModel:
    """
    H = -(Σ_{i<L} Z_i Z_{i+1} + Z_L Z_1) - g Σ_i X_i on L periodic sites.
    """
    if isinstance(L, bool) or not isinstance(L, (int, np.integer)) or not MIN_SITES <= L <= MAX_SITES:
        raise InvalidArgumentError(f"L must be an integer in [{MIN_SITES}, {MAX_SITES}], got {L!r}")
    if not math.isfinite(g):
        raise InvalidArgumentError(f"g must be finite, got {g!r}")
    L = int(L)

    def site_operator(op, site):
        ops = [_IDENTITY] * L
        ops[site] = op
        result = ops[0]
        for nxt in ops[1:]:
            result = sparse.kron(result, nxt, format="csr")
        return result

    z_ops = [site_operator(_SIGMA_Z, i) for i in range(L)]
    x_ops = [site_operator(_SIGMA_X, i) for i in range(L)]

    bonds = [(i, i + 1) for i in range(L - 1)] + [(L - 1, 0)]
    zz = sum((z_ops[a] @ z_ops[b] for a, b in bonds), sparse.csr_matrix((1 << L, 1 << L)))
    x_field = sum(x_ops, sparse.csr_matrix((1 << L, 1 << L)))

    matrix = (-zz - g * x_field).toarray()
    # kron of real symmetric factors is symmetric up to rounding
    matrix = 0.5 * (matrix + matrix.T)
    logger.debug(f"Built TFIM Hamiltonian L={L} g={g} (dim {matrix.shape[0]})")
    return HamiltonianModel(sites=L, coupling=float(g), matrix=matrix)


@log_performance
def eigendecompose(H: Union[HamiltonianModel, np.ndarray], verify: bool = True) -> Eigensystem:
    """
    Dense symmetric eigensolve with eigenvalues in ascending order.

    With ``verify`` the residual ‖Hv − Ev‖₂ and orthonormality are checked
    against 1e-9·‖H‖₂ and 1e-9.
    """
    matrix = H.matrix if isinstance(H, HamiltonianModel) else np.asarray(H, dtype=np.float64)
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(matrix)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise NumericError(f"eigensolver failed: {e}", {"dimension": matrix.shape[0]}) from e

    if verify:
        scale = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
        residual = float(np.max(np.linalg.norm(matrix @ eigenvectors - eigenvectors * eigenvalues, axis=0)))
        orthogonality = float(np.max(np.abs(eigenvectors.T @ eigenvectors - np.eye(matrix.shape[0]))))
        diagnostics = {"residual": residual, "orthogonality": orthogonality,
                       "norm": scale, "dimension": matrix.shape[0]}
        if residual > EIGEN_RTOL * max(scale, np.finfo(float).tiny) or orthogonality > EIGEN_RTOL:
            raise NumericError("eigendecomposition misses its accuracy contract", diagnostics)
        logger.debug(f"Eigendecomposition diagnostics: {diagnostics}")

    return Eigensystem(eigenvalues, eigenvectors)


def phases_from_eigenvalues(eigenvalues: Sequence[float]) -> SpectralModel:
    """λ_m = (π/4) E_m / ‖H‖₂ with ‖H‖₂ = max |E_m|."""
    eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
    norm = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    if norm == 0.0:
        raise InvalidArgumentError("cannot rescale a zero Hamiltonian")
    phases = (math.pi / 4.0) * eigenvalues / norm
    return SpectralModel(eigenvalues=eigenvalues, norm=norm, phases=phases)


def spectral_phases(H: Union[HamiltonianModel, np.ndarray]) -> np.ndarray:
    """Eigenphases of exp(iπH / (4‖H‖₂)), representatives in [-π/4, π/4]."""
    eigenvalues = eigendecompose(H).eigenvalues
    return phases_from_eigenvalues(eigenvalues).phases


@cached_spectrum("tfim")
def tfim_spectral_model(L: int, g: float) -> SpectralModel:
    """Spectral model of the TFIM, cached on (L, g)."""
    return phases_from_eigenvalues(eigendecompose(build_tfim(L, g)).eigenvalues)


def phase_to_energy(theta: float, norm: float) -> float:
    """Inverse of the phase rescaling, using the representative of theta in [-π, π)."""
    return 4.0 * norm * reference_angle(theta) / math.pi


def make_initial_state(phases: Sequence[float],
                       target_index: int,
                       p0: float,
                       residual_policy: Union[ResidualPolicy, str] = ResidualPolicy.RANDOM,
                       seed: Optional[int] = None,
                       residual_index: Optional[int] = None) -> SpectralDecomposition:
    """
    Initial state with overlap p0 on ``target_index``.

    The residual 1 - p0 goes evenly to every other state (UNIFORM), to
    normalized squared standard-normal draws seeded by ``seed`` (RANDOM), or
    entirely to ``residual_index`` (SINGLE).
    """
    phases = np.asarray(phases, dtype=np.float64).reshape(-1)
    if not (isinstance(p0, (int, float, np.floating)) and 0.0 < p0 <= 1.0):
        raise InvalidArgumentError(f"p0 must lie in (0, 1], got {p0!r}")
    if not 0 <= target_index < phases.size:
        raise InvalidArgumentError(f"target_index {target_index} out of range for {phases.size} phases")
    policy = ResidualPolicy(residual_policy)

    weights = np.zeros(phases.size)
    weights[target_index] = p0
    residual = 1.0 - p0
    others = np.array([m for m in range(phases.size) if m != target_index], dtype=int)

    if residual > 0.0:
        if others.size == 0:
            raise InvalidArgumentError("p0 < 1 needs at least one non-target state")
        if policy is ResidualPolicy.UNIFORM:
            weights[others] = residual / others.size
        elif policy is ResidualPolicy.RANDOM:
            draws = np.random.default_rng(seed).standard_normal(others.size) ** 2
            weights[others] = residual * draws / draws.sum()
        else:
            if residual_index is None or residual_index == target_index \
                    or not 0 <= residual_index < phases.size:
                raise InvalidArgumentError(
                    f"SINGLE policy needs a residual_index distinct from the target, got {residual_index!r}")
            weights[residual_index] = residual

    return SpectralDecomposition(phases=phases, weights=weights, target_index=target_index)


def exact_expectation(sd: SpectralDecomposition, t: int) -> complex:
    """<ψ|U^t|ψ> = Σ_m p_m exp(i t λ_m)."""
    if isinstance(t, bool) or not isinstance(t, (int, np.integer)) or t < 1:
        raise InvalidArgumentError(f"power t must be a positive integer, got {t!r}")
    # reduce t·λ modulo 2π before exponentiating
    angles = np.mod(float(t) * sd.phases, 2.0 * math.pi)
    return complex(np.sum(sd.weights * np.exp(1j * angles)))


def load_spectrum(path: Union[str, Path]) -> SpectralDecomposition:
    path = Path(path)
    try:
        return SpectralDecomposition.from_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ExportError(f"could not read spectrum {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InvalidArgumentError(f"spectrum {path} is not valid JSON: {e}") from e


def dump_spectrum(sd: SpectralDecomposition, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(sd.to_json() + "\n", encoding="utf-8")
    except OSError as e:
        raise ExportError(f"could not write spectrum {path}: {e}") from e
    return path
