"""Exact Clifford-averaged sequence fidelity, in closed form.

Averaging an RB sequence over a unitary 2-design collapses the gate average
into two environment-only superoperators per noise step:

* the *mixed-input map* ``pounds``-style: eps -> tr_S[ Lambda(eps x I/d) ],
  which propagates the trace sector, and
* the *loop map*: eps -> sum_{s,s'} <s| Lambda(eps x |s><s'|) |s'>, whose
  combination (loop - mixed)/(d^2 - 1) propagates the traceless sector.

The averaged fidelity after m steps is then a boundary contraction of the
m-th powers of those two maps, so the cost is linear in m.  For trivial
(one-dimensional) environments this reproduces the textbook A p^m + B decay.

Both superoperators are built columnwise from their defining expressions by
feeding in every environment basis element; slower than an index-juggling
construction but correct by inspection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ShapeError, UnsupportedConfigurationError
from .noise import JointUnitary, MarkovianChannel, NoiseModel
from .quantum import GateSet, dagger, validate_density_matrix, validate_povm_element
from .rb import AsfCurve


@dataclass(frozen=True)
class NoiseSteps:
    """Per-slot Kraus decomposition of a noise process on environment x system.

    ``bulk`` fills the m gate-interleaved slots, ``prep`` the slot before the
    first gate and ``final`` the slot after the compiled inverse.  Markovian
    models embed with a one-dimensional environment.
    """

    d_env: int
    d_sys: int
    rho_env: np.ndarray
    bulk: tuple[np.ndarray, ...]
    prep: tuple[np.ndarray, ...]
    final: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.d_env * self.d_sys

    @staticmethod
    def from_model(model: NoiseModel) -> "NoiseSteps":
        if isinstance(model, MarkovianChannel):
            d_env, d_sys = 1, model.d_sys
            rho_env = np.ones((1, 1), dtype=np.complex128)
            bulk = model.channel.operators
        elif isinstance(model, JointUnitary):
            d_env, d_sys = model.d_env, model.d_sys
            rho_env = model.rho_env
            bulk = (model.unitary,)
        else:
            raise InputError(f"unknown noise model type {type(model)!r}")
        dim = d_env * d_sys
        prep = model.prep.operators if model.prep is not None else (np.eye(dim, dtype=np.complex128),)
        final = model.final.operators if model.final is not None else bulk
        return NoiseSteps(d_env, d_sys, rho_env, bulk, prep, final)

    @staticmethod
    def uniform(node: np.ndarray, rho_env: np.ndarray, d_env: int) -> "NoiseSteps":
        """Time-independent unitary noise with the same node in every slot,
        including preparation and final: the learner's model class."""
        node = np.asarray(node, dtype=np.complex128)
        d_sys = node.shape[0] // d_env
        return NoiseSteps(d_env, d_sys, np.asarray(rho_env, dtype=np.complex128),
                          (node,), (node,), (node,))


def apply_kraus(ops: tuple[np.ndarray, ...], rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rho)
    for k in ops:
        out += k @ rho @ dagger(k)
    return out


def partial_trace_sys(rho: np.ndarray, d_env: int, d_sys: int) -> np.ndarray:
    """Trace out the system factor of an environment x system operator."""
    r4 = rho.reshape(d_env, d_sys, d_env, d_sys)
    return np.einsum("esfs->ef", r4)


def env_loop_map(ops: tuple[np.ndarray, ...], d_env: int, d_sys: int) -> np.ndarray:
    """Environment superoperator from closing the system legs in a loop.

    Defined on basis elements by
    ``|a><b|  ->  sum_{s,s'} <s| Lambda(|a><b| x |s><s'|) |s'>``
    and returned as a (d_env^2, d_env^2) matrix acting on row-major
    vectorized environment operators.  For the identity step this is
    d_sys^2 times the identity superoperator.
    """
    d2 = d_env * d_env
    mat = np.zeros((d2, d2), dtype=np.complex128)
    for a in range(d_env):
        for b in range(d_env):
            eps = np.zeros((d_env, d_env), dtype=np.complex128)
            eps[a, b] = 1.0
            out = np.zeros((d_env, d_env), dtype=np.complex128)
            for s in range(d_sys):
                for sp in range(d_sys):
                    sys_part = np.zeros((d_sys, d_sys), dtype=np.complex128)
                    sys_part[s, sp] = 1.0
                    y = apply_kraus(ops, np.kron(eps, sys_part))
                    y4 = y.reshape(d_env, d_sys, d_env, d_sys)
                    out += y4[:, s, :, sp]
            mat[:, a * d_env + b] = out.reshape(-1)
    return mat


def env_mixed_map(ops: tuple[np.ndarray, ...], d_env: int, d_sys: int) -> np.ndarray:
    """Environment superoperator with the system in the maximally mixed state:
    ``|a><b|  ->  tr_S[ Lambda(|a><b| x I/d_sys) ]``.

    Trace preserving whenever the step is; the identity step gives the
    identity superoperator.
    """
    d2 = d_env * d_env
    mix = np.eye(d_sys, dtype=np.complex128) / d_sys
    mat = np.zeros((d2, d2), dtype=np.complex128)
    for a in range(d_env):
        for b in range(d_env):
            eps = np.zeros((d_env, d_env), dtype=np.complex128)
            eps[a, b] = 1.0
            y = apply_kraus(ops, np.kron(eps, mix))
            mat[:, a * d_env + b] = partial_trace_sys(y, d_env, d_sys).reshape(-1)
    return mat


def _boundary_value(steps: NoiseSteps, x: np.ndarray, povm: np.ndarray) -> float:
    """tr[(I_env x M) Final(x)] for an environment x system operator x."""
    y = apply_kraus(steps.final, x)
    meas = np.kron(np.eye(steps.d_env, dtype=np.complex128), povm)
    return float(np.real(np.trace(meas @ y)))


def clifford_averaged_asf_curve(
    noise: NoiseModel | NoiseSteps,
    rho_sys: np.ndarray,
    povm: np.ndarray,
    m_max: int,
    gate_set: GateSet | None = None,
) -> np.ndarray:
    """Exact 2-design-averaged sequence fidelity for every length 1..m_max.

    All lengths share one linear pass: the trace and traceless sectors are
    propagated step by step and the measurement boundary is evaluated after
    each step.

    Args:
        noise: a noise model, or a prepared :class:`NoiseSteps`.
        rho_sys: initial system state.
        povm: measured POVM element.
        m_max: largest sequence length.
        gate_set: optional; if given it must be flagged as a unitary
            2-design, otherwise the closed form does not apply.
    """
    if gate_set is not None and not gate_set.is_two_design:
        raise UnsupportedConfigurationError(
            f"gate set {gate_set.label!r} is not flagged as a unitary 2-design; "
            "use the Monte Carlo estimator instead"
        )
    if m_max < 1:
        raise InputError(f"m_max must be >= 1, got {m_max}")
    steps = noise if isinstance(noise, NoiseSteps) else NoiseSteps.from_model(noise)
    d_env, d_sys = steps.d_env, steps.d_sys
    rho_sys = validate_density_matrix(np.asarray(rho_sys, dtype=np.complex128), name="rho_sys")
    povm = validate_povm_element(np.asarray(povm, dtype=np.complex128))
    if rho_sys.shape[0] != d_sys or povm.shape[0] != d_sys:
        raise ShapeError("state/POVM dimension does not match the noise model's system")

    rho = apply_kraus(steps.prep, np.kron(steps.rho_env, rho_sys))
    env_trace = partial_trace_sys(rho, d_env, d_sys)
    mix = (np.eye(d_sys, dtype=np.complex128) / d_sys).reshape(-1)

    # Traceless sector stored as (env pair) x (sys pair); only its env index
    # evolves.  Trace sector is a vectorized environment operator.
    r_block = rho.reshape(d_env, d_sys, d_env, d_sys).transpose(0, 2, 1, 3)
    r_block = r_block.reshape(d_env * d_env, d_sys * d_sys).copy()
    r_block -= np.outer(env_trace.reshape(-1), mix)
    t_vec = env_trace.reshape(-1).copy()

    mixed = env_mixed_map(steps.bulk, d_env, d_sys)
    loop = env_loop_map(steps.bulk, d_env, d_sys)
    traceless = (loop - mixed) / (d_sys * d_sys - 1)

    values = np.empty(m_max, dtype=np.float64)
    for m in range(1, m_max + 1):
        r_block = traceless @ r_block
        t_vec = mixed @ t_vec
        combined = r_block + np.outer(t_vec, mix)
        x = combined.reshape(d_env, d_env, d_sys, d_sys).transpose(0, 2, 1, 3)
        x = x.reshape(steps.dim, steps.dim)
        values[m - 1] = _boundary_value(steps, x, povm)
    return values


def clifford_averaged_asf(
    noise: NoiseModel | NoiseSteps,
    rho_sys: np.ndarray,
    povm: np.ndarray,
    m: int,
    gate_set: GateSet | None = None,
) -> float:
    """Exact 2-design-averaged sequence fidelity at one length."""
    return float(clifford_averaged_asf_curve(noise, rho_sys, povm, m, gate_set)[-1])


@dataclass(frozen=True)
class ExpFit:
    """Least-squares fit of an ASF curve to amplitude * decay^m + offset."""

    amplitude: float
    decay: float
    offset: float
    max_residual: float
    degenerate: bool = False

    def predict(self, lengths) -> np.ndarray:
        ms = np.asarray(lengths, dtype=np.float64)
        return self.amplitude * self.decay ** ms + self.offset


def _solve_linear(p: float, ms: np.ndarray, ys: np.ndarray) -> tuple[float, float, float]:
    """Best (A, B) for fixed decay p; returns (A, B, sse)."""
    design = np.column_stack([p ** ms, np.ones_like(ms)])
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = design @ coef - ys
    return float(coef[0]), float(coef[1]), float(resid @ resid)


def fit_exponential(curve: AsfCurve) -> ExpFit:
    """Fit A p^m + B with p constrained to [-1, 1].

    Deterministic: a fixed grid over p followed by golden-section refinement;
    (A, B) are solved linearly at each candidate p.  A flat curve short-cuts
    to the degenerate fit (p = 1, offset = mean).
    """
    if len(curve.lengths) < 4:
        raise InputError("exponential fit needs at least 4 points")
    ms = np.asarray(curve.lengths, dtype=np.float64)
    ys = np.asarray(curve.means, dtype=np.float64)
    if float(ys.max() - ys.min()) < 1e-14:
        mean = float(ys.mean())
        resid = float(np.max(np.abs(ys - mean)))
        return ExpFit(0.0, 1.0, mean, resid, degenerate=True)

    grid = np.linspace(-1.0, 1.0, 4001)
    sses = np.array([_solve_linear(p, ms, ys)[2] for p in grid])
    k = int(np.argmin(sses))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]

    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc = _solve_linear(c, ms, ys)[2]
    fd = _solve_linear(d, ms, ys)[2]
    for _ in range(200):
        if b - a < 1e-15:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = _solve_linear(c, ms, ys)[2]
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = _solve_linear(d, ms, ys)[2]
    p_best = float((a + b) / 2.0)
    amp, off, _ = _solve_linear(p_best, ms, ys)
    resid = float(np.max(np.abs(amp * p_best ** ms + off - ys)))
    return ExpFit(amp, p_best, off, resid)
