"""Noise models for the RB experiments.

Two families:

* Markovian single-qubit channels (phase flip, amplitude damping,
  depolarizing) that attach independently to every gate, and
* a two-qubit environment-system unitary generated by a static spin
  Hamiltonian, whose memory makes the averaged sequence fidelity deviate
  from a single exponential.

In both families the same channel fills every gate slot, including the one
after the compiled inverse.  Optional state-preparation and final slots exist
for SPAM studies; the preparation slot defaults to the identity and the final
slot defaults to the bulk channel itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, InputError, ShapeError
from .quantum import (
    I2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    KrausChannel,
    basis_state,
    validate_density_matrix,
    validate_unitary,
)


@dataclass(frozen=True)
class MarkovianChannel:
    """Memoryless noise: one Kraus channel on the system, reapplied per gate."""

    channel: KrausChannel
    prep: KrausChannel | None = None
    final: KrausChannel | None = None
    label: str = "markovian"

    def __post_init__(self):
        for slot in (self.prep, self.final):
            if slot is not None and slot.dim != self.channel.dim:
                raise ShapeError("prep/final slots must act on the same space as the channel")

    @property
    def d_sys(self) -> int:
        return self.channel.dim

    @property
    def d_env(self) -> int:
        return 1


@dataclass(frozen=True)
class JointUnitary:
    """Unitary noise on environment x system with a fixed fiducial state.

    ``unitary`` acts on the composite space with the environment as the first
    tensor factor; ``rho_env`` is the initial environment state.
    """

    unitary: np.ndarray
    rho_env: np.ndarray
    d_env: int
    prep: KrausChannel | None = None
    final: KrausChannel | None = None
    label: str = "joint_unitary"

    def __post_init__(self):
        u = validate_unitary(self.unitary, tol=1e-9, name="joint unitary")
        rho = validate_density_matrix(self.rho_env, name="rho_env")
        if self.d_env < 1:
            raise DomainError(f"d_env must be positive, got {self.d_env}")
        if rho.shape[0] != self.d_env:
            raise ShapeError(f"rho_env has dim {rho.shape[0]}, expected d_env={self.d_env}")
        if u.shape[0] % self.d_env != 0:
            raise ShapeError(
                f"joint unitary dim {u.shape[0]} is not divisible by d_env={self.d_env}"
            )
        for slot in (self.prep, self.final):
            if slot is not None and slot.dim != u.shape[0]:
                raise ShapeError("prep/final slots must act on the full joint space")
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "rho_env", rho)

    @property
    def d_sys(self) -> int:
        return self.unitary.shape[0] // self.d_env


NoiseModel = Union[MarkovianChannel, JointUnitary]


def _check_probability(p: float, name: str) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p}")
    return p


def phase_flip(p: float) -> MarkovianChannel:
    """Phase-flip channel with Kraus pair sqrt(1-p) I and sqrt(p) Z."""
    p = _check_probability(p, "phase-flip probability")
    ops = (np.sqrt(1.0 - p) * I2, np.sqrt(p) * PAULI_Z)
    return MarkovianChannel(KrausChannel(ops), label=f"phase_flip(p={p})")


def amplitude_damping(gamma: float) -> MarkovianChannel:
    """Amplitude damping: K0 = diag(1, sqrt(1-gamma)), K1 = sqrt(gamma)|0><1|."""
    gamma = _check_probability(gamma, "damping strength")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return MarkovianChannel(KrausChannel((k0, k1)), label=f"amplitude_damping(gamma={gamma})")


def depolarizing(p: float) -> MarkovianChannel:
    """Depolarizing channel rho -> (1-p) rho + p I/2, via four Pauli Kraus ops."""
    p = _check_probability(p, "depolarizing probability")
    ops = (
        np.sqrt(1.0 - 3.0 * p / 4.0) * I2,
        np.sqrt(p / 4.0) * PAULI_X,
        np.sqrt(p / 4.0) * PAULI_Y,
        np.sqrt(p / 4.0) * PAULI_Z,
    )
    return MarkovianChannel(KrausChannel(ops), label=f"depolarizing(p={p})")


def spin_hamiltonian(coupling: float, field_x: float, field_y: float) -> np.ndarray:
    """Two-spin Hamiltonian J X1 X2 + h_x (X1 + X2) + h_y (Y1 + Y2).

    Site 1 is the environment qubit, site 2 the system qubit.
    """
    xx = np.kron(PAULI_X, PAULI_X)
    x1 = np.kron(PAULI_X, I2)
    x2 = np.kron(I2, PAULI_X)
    y1 = np.kron(PAULI_Y, I2)
    y2 = np.kron(I2, PAULI_Y)
    return coupling * xx + field_x * (x1 + x2) + field_y * (y1 + y2)


def hermitian_expm(h: np.ndarray, scale: complex) -> np.ndarray:
    """exp(scale * h) for Hermitian h via eigendecomposition (exact at 4x4)."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(scale * w)) @ np.conj(v).T


def spin_unitary(
    coupling: float, field_x: float, field_y: float, delta: float
) -> JointUnitary:
    """Static two-qubit noise unitary exp(-i delta H) with one environment qubit.

    The environment starts in |0><0|.  For small delta the unitary is close to
    the identity but couples environment and system, which is what produces
    the non-exponential sequence-fidelity signature.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    h = spin_hamiltonian(coupling, field_x, field_y)
    lam = hermitian_expm(h, -1j * float(delta))
    return JointUnitary(
        unitary=lam,
        rho_env=basis_state(0, 2),
        d_env=2,
        label=f"spin_unitary(J={coupling}, hx={field_x}, hy={field_y}, delta={delta})",
    )


# --- serialization ---------------------------------------------------------

def noise_model_to_dict(model: NoiseModel) -> dict:
    """Parameter record sufficient to rebuild the model exactly."""
    from .linalg import matrix_to_json_dict

    if isinstance(model, MarkovianChannel):
        d = {
            "kind": "markovian",
            "label": model.label,
            "kraus": [matrix_to_json_dict(k) for k in model.channel.operators],
        }
    elif isinstance(model, JointUnitary):
        d = {
            "kind": "joint_unitary",
            "label": model.label,
            "unitary": matrix_to_json_dict(model.unitary),
            "rho_env": matrix_to_json_dict(model.rho_env),
            "d_env": model.d_env,
        }
    else:  # pragma: no cover - union is closed
        raise InputError(f"unknown noise model type {type(model)!r}")
    for slot_name in ("prep", "final"):
        slot = getattr(model, slot_name)
        if slot is not None:
            d[slot_name] = [matrix_to_json_dict(k) for k in slot.operators]
    return d


_PARAMETRIC_BUILDERS = {
    "phase_flip": lambda d: phase_flip(d["p"]),
    "amplitude_damping": lambda d: amplitude_damping(d["gamma"]),
    "depolarizing": lambda d: depolarizing(d["p"]),
    "spin_unitary": lambda d: spin_unitary(d["J"], d["hx"], d["hy"], d["delta"]),
    "identity": lambda d: MarkovianChannel(
        KrausChannel((np.eye(int(d.get("dim", 2)), dtype=np.complex128),)), label="identity"
    ),
}


def noise_model_from_dict(d: dict) -> NoiseModel:
    """Rebuild a noise model from a record written by :func:`noise_model_to_dict`
    or from a short parametric form like ``{"kind": "phase_flip", "p": 0.06}``."""
    from .linalg import matrix_from_json_dict

    try:
        kind = d["kind"]
    except (KeyError, TypeError) as exc:
        raise InputError("noise model record is missing its 'kind' tag") from exc
    if kind in _PARAMETRIC_BUILDERS:
        try:
            return _PARAMETRIC_BUILDERS[kind](d)
        except KeyError as exc:
            raise InputError(f"noise model '{kind}' is missing parameter {exc}") from exc

    def slot(name: str) -> KrausChannel | None:
        if name not in d:
            return None
        return KrausChannel(tuple(matrix_from_json_dict(k) for k in d[name]))

    if kind == "markovian":
        ch = KrausChannel(tuple(matrix_from_json_dict(k) for k in d["kraus"]))
        return MarkovianChannel(ch, prep=slot("prep"), final=slot("final"),
                                label=d.get("label", "markovian"))
    if kind == "joint_unitary":
        return JointUnitary(
            unitary=matrix_from_json_dict(d["unitary"]),
            rho_env=matrix_from_json_dict(d["rho_env"]),
            d_env=int(d["d_env"]),
            prep=slot("prep"),
            final=slot("final"),
            label=d.get("label", "joint_unitary"),
        )
    raise InputError(f"unknown noise model kind {kind!r}")
