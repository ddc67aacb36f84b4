"""Sweeping learner: fits a unitary environment-coupled noise node to ASF data.

The model is a single time-independent unitary node on environment x system,
repeated in every noise slot of the process tensor, with the environment
fixed in |0><0|.  One iteration of the sweep:

1. fuse the node with its neighbour at the scheduled slot pair into a joint
   node (contracting their shared environment bond);
2. take the gradient of the quadratic cost with respect to the joint node —
   the fidelity is linear in it, so the gradient is a residual-weighted sum
   of coefficient tensors — and apply an Adagrad or Adam update;
3. split the updated joint node by SVD, keep the leading d_env singular
   directions, regroup the two factors into square nodes and project each
   onto the unitary group;
4. replace the shared node (all slots at once): the projected pair composed
   over the bond is a two-slot propagator, so each slot receives its
   principal unitary square root.  On an unperturbed joint this reproduces
   the node exactly, which is what makes small gradient steps act like
   small node steps.

The no-noise initialization is a stationary saddle of the cost on the
unitary group (the fidelity is maximal there and the update above is
exactly neutral), so no first-order step can leave it.  Training therefore
departs the saddle with a curvature-probing stage: measure the cost Hessian
along the unitary tangent directions, line-minimize along the most negative
one, and repeat until no descending direction remains.  For memoryless data
those directions stay inside the environment-block structure; temporally
correlated data develops negative curvature in the environment-coupling
directions, and the node leaves the uncoupled manifold.  The sweep then
polishes.  Cost and l1 traces are recorded per iteration and the best
(minimum-cost) iterate is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .average import NoiseSteps, clifford_averaged_asf_curve
from .errors import DomainError, InputError, NumericalError, ShapeError
from .linalg import dagger, principal_unitary_sqrt, project_to_unitary, svd
from .process_tensor import asf_joint_coefficient, joint_node
from .quantum import basis_state, validate_density_matrix, validate_povm_element, validate_unitary
from .rb import AsfCurve


# --------------------------------------------------------------------------
# optimizers
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Adagrad:
    """Per-entry adaptive rate alpha / sqrt(sum |g|^2)."""

    rate: float = 1e-5
    epsilon: float = 1e-8


@dataclass(frozen=True)
class Adam:
    """Bias-corrected first/second moment update."""

    rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.99
    epsilon: float = 1e-8


OptimizerConfig = Union[Adagrad, Adam]


def init_accumulators(cfg: OptimizerConfig, shape: tuple[int, ...]) -> dict:
    if isinstance(cfg, Adagrad):
        return {"sq_sum": np.zeros(shape, dtype=np.float64)}
    if isinstance(cfg, Adam):
        return {
            "m1": np.zeros(shape, dtype=np.complex128),
            "m2": np.zeros(shape, dtype=np.float64),
            "t": 0,
        }
    raise InputError(f"unknown optimizer config {cfg!r}")


def optimizer_step(acc: dict, grad: np.ndarray, cfg: OptimizerConfig) -> np.ndarray:
    """Scaled update for one gradient; mutates the accumulators in place.

    Complex entries are handled with a shared magnitude accumulator per
    entry, i.e. |g|^2 drives the adaptive denominator for both quadratures.
    """
    if isinstance(cfg, Adagrad):
        if acc["sq_sum"].shape != grad.shape:
            raise ShapeError("accumulator shape does not match the gradient")
        acc["sq_sum"] += np.abs(grad) ** 2
        return cfg.rate * grad / np.sqrt(acc["sq_sum"] + cfg.epsilon)
    if isinstance(cfg, Adam):
        if acc["m1"].shape != grad.shape:
            raise ShapeError("accumulator shape does not match the gradient")
        acc["t"] += 1
        acc["m1"] = cfg.beta1 * acc["m1"] + (1.0 - cfg.beta1) * grad
        acc["m2"] = cfg.beta2 * acc["m2"] + (1.0 - cfg.beta2) * np.abs(grad) ** 2
        m_hat = acc["m1"] / (1.0 - cfg.beta1 ** acc["t"])
        v_hat = acc["m2"] / (1.0 - cfg.beta2 ** acc["t"])
        return cfg.rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)
    raise InputError(f"unknown optimizer config {cfg!r}")


# --------------------------------------------------------------------------
# configuration and state
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LearnerConfig:
    d_env: int = 2
    optimizer: OptimizerConfig = field(default_factory=Adagrad)
    max_iterations: int = 200
    convergence_divisor: float = 1.0
    sweep_order: str = "ascending"
    unitarity_tol: float = 1e-9
    seed: int = 0
    update_jitter: float = 0.0
    departure_rounds: int = 8

    def __post_init__(self):
        if self.d_env < 1:
            raise DomainError("d_env must be positive")
        if self.convergence_divisor < 1.0:
            raise DomainError("convergence divisor must be >= 1")
        if self.sweep_order not in ("ascending", "descending"):
            raise InputError(f"unknown sweep order {self.sweep_order!r}")
        if self.update_jitter < 0:
            raise DomainError("update_jitter must be >= 0")
        if self.departure_rounds < 0:
            raise DomainError("departure_rounds must be >= 0")


@dataclass
class LearnerState:
    node: np.ndarray
    accumulators: dict
    iteration: int = 0
    cost_trace: list = field(default_factory=list)
    l1_trace: list = field(default_factory=list)
    unitarity_trace: list = field(default_factory=list)
    best_node: np.ndarray | None = None
    best_cost: float = np.inf
    best_iteration: int = 0


@dataclass(frozen=True)
class TrainingResult:
    node: np.ndarray
    predicted: AsfCurve
    cost_trace: tuple[float, ...]
    l1_trace: tuple[float, ...]
    unitarity_trace: tuple[float, ...]
    converged: bool
    iterations: int
    best_iteration: int


# --------------------------------------------------------------------------
# pieces of one sweep iteration
# --------------------------------------------------------------------------

def _steps_for(node: np.ndarray, cfg_d_env: int) -> NoiseSteps:
    d_env = cfg_d_env
    return NoiseSteps.uniform(node, basis_state(0, d_env), d_env)


def predicted_curve(node: np.ndarray, d_env: int, rho_sys, povm, lengths) -> np.ndarray:
    full = clifford_averaged_asf_curve(_steps_for(node, d_env), rho_sys, povm, max(lengths))
    return np.asarray([full[n - 1] for n in lengths], dtype=np.float64)


def cost(node: np.ndarray, d_env: int, data: AsfCurve, rho_sys, povm) -> float:
    """Quadratic cost between model predictions and the measured curve."""
    pred = predicted_curve(node, d_env, rho_sys, povm, data.lengths)
    resid = pred - np.asarray(data.means)
    return float(0.5 * np.sum(resid * resid))


def gradient_joint(
    node: np.ndarray, d_env: int, data: AsfCurve, rho_sys, povm, slot_i: int
) -> np.ndarray:
    """Descent direction for the joint node at slots (slot_i, slot_i - 1).

    Sum over curve points of (measured - predicted) times the fidelity's
    coefficient tensor in the joint node; lengths n < slot_i - 1 do not
    contain the slot pair and contribute nothing.
    """
    m_max = max(data.lengths)
    if not 1 <= slot_i <= m_max + 1:
        raise InputError(f"slot {slot_i} out of range for data up to length {m_max}")
    steps = _steps_for(node, d_env)
    pred = predicted_curve(node, d_env, rho_sys, povm, data.lengths)
    d_sys = steps.d_sys
    grad = np.zeros((d_env, d_sys, d_sys, d_env, d_sys, d_sys), dtype=np.complex128)
    for n, f_exp, f_model in zip(data.lengths, data.means, pred):
        if n < max(slot_i - 1, 1):
            continue
        coeff = asf_joint_coefficient(steps, slot_i, n, rho_sys, povm)
        grad += (f_exp - f_model) * coeff
    return grad


def split_truncate(joint_mat: np.ndarray, d_env: int) -> tuple[np.ndarray, np.ndarray]:
    """SVD-split a joint node and keep the leading d_env bond directions.

    The (d_env d_sys^2) square input is factored as (U sqrt(S)) (sqrt(S) V^dag),
    truncated to bond d_env, and each factor is regrouped into a square
    d_env*d_sys node: the bond becomes the upper factor's environment input
    and the lower factor's environment output.
    """
    joint_mat = np.asarray(joint_mat, dtype=np.complex128)
    k = joint_mat.shape[0]
    if joint_mat.ndim != 2 or joint_mat.shape[1] != k or k % d_env != 0:
        raise ShapeError(f"joint node matrix has shape {joint_mat.shape}")
    d_sys = int(round(np.sqrt(k // d_env)))
    if d_env * d_sys * d_sys != k:
        raise ShapeError(f"cannot infer system dimension from shape {joint_mat.shape}")
    res = svd(joint_mat)
    sqrt_s = np.sqrt(res.s[:d_env])
    u_part = res.u[:, :d_env] * sqrt_s
    vh_part = sqrt_s[:, None] * dagger(res.v)[:d_env, :]
    n = d_env * d_sys
    upper = u_part.reshape(d_env, d_sys, d_sys, d_env).transpose(0, 1, 3, 2).reshape(n, n)
    lower = vh_part.reshape(d_env, d_env, d_sys, d_sys).transpose(0, 2, 1, 3).reshape(n, n)
    return upper, lower


def project_pair(upper: np.ndarray, lower: np.ndarray) -> np.ndarray:
    """Closest-unitary projection of both split factors, composed over the
    bond into the two-slot propagator."""
    return project_to_unitary(upper) @ project_to_unitary(lower)


def replacement_node(
    upper: np.ndarray, lower: np.ndarray, near: np.ndarray | None = None
) -> np.ndarray:
    """Single-slot node that replaces every slot after a joint update.

    The projected pair composed over the bond spans two time slots; the
    time-independent per-slot node is its unitary square root, with the
    branch chosen closest to ``near`` (the node being replaced), so that
    splitting an unperturbed joint hands back the original node.
    """
    return principal_unitary_sqrt(project_pair(upper, lower), near=near)


def _unitarity_defect(node: np.ndarray) -> float:
    eye = np.eye(node.shape[0])
    return float(np.linalg.norm(dagger(node) @ node - eye))


def _hermitian_basis(dim: int) -> list[np.ndarray]:
    basis = []
    for j in range(dim):
        h = np.zeros((dim, dim), dtype=np.complex128)
        h[j, j] = 1.0
        basis.append(h)
    for j in range(dim):
        for k in range(j + 1, dim):
            h = np.zeros((dim, dim), dtype=np.complex128)
            h[j, k] = h[k, j] = 1.0 / np.sqrt(2.0)
            basis.append(h)
            h = np.zeros((dim, dim), dtype=np.complex128)
            h[j, k] = -1j / np.sqrt(2.0)
            h[k, j] = 1j / np.sqrt(2.0)
            basis.append(h)
    return basis


def _tangent_probe(
    node: np.ndarray, d_env: int, data: AsfCurve, rho_sys, povm, probe: float = 1e-3
) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
    """Gradient and Hessian of the cost on the unitary tangent space at `node`.

    Probes cost(exp(-i eta H) node) with central differences along a
    Hermitian basis; returns (gradient coefficients, Hessian matrix, basis).
    """
    dim = node.shape[0]
    basis = _hermitian_basis(dim)
    n_dir = len(basis)
    c0 = cost(node, d_env, data, rho_sys, povm)

    def cost_along(coeffs: np.ndarray) -> float:
        from .noise import hermitian_expm

        h = sum(c * b for c, b in zip(coeffs, basis))
        return cost(hermitian_expm(h, -1j * probe) @ node, d_env, data, rho_sys, povm)

    grad = np.zeros(n_dir)
    hess = np.zeros((n_dir, n_dir))
    plus = np.zeros(n_dir)
    minus = np.zeros(n_dir)
    for a in range(n_dir):
        e = np.zeros(n_dir)
        e[a] = 1.0
        plus[a] = cost_along(e)
        minus[a] = cost_along(-e)
        grad[a] = (plus[a] - minus[a]) / (2.0 * probe)
        hess[a, a] = (plus[a] - 2.0 * c0 + minus[a]) / probe**2
    for a in range(n_dir):
        for b in range(a + 1, n_dir):
            e = np.zeros(n_dir)
            e[a] = e[b] = 1.0
            mixed = (cost_along(e) - 2.0 * c0 + cost_along(-e)) / probe**2
            hess[a, b] = hess[b, a] = (mixed - hess[a, a] - hess[b, b]) / 2.0
    return grad, hess, basis


def escape_direction(
    node: np.ndarray, d_env: int, data: AsfCurve, rho_sys, povm, probe: float = 1e-3
) -> np.ndarray | None:
    """Most-negative-curvature Hermitian generator of the cost at `node`.

    The no-noise initialization is a stationary point of the cost on the
    unitary group (the fidelity is maximal there), and the split/project
    cycle is exactly stationary too, so plain gradient steps cannot leave
    it.  Returns the minimal-curvature eigendirection of the tangent
    Hessian (deterministic sign), or None when every curvature is
    non-negative.
    """
    _, hess, basis = _tangent_probe(node, d_env, data, rho_sys, povm, probe)
    w, v = np.linalg.eigh(hess)
    if w[0] >= 0.0:
        return None
    vec = v[:, 0]
    pivot = int(np.argmax(np.abs(vec)))
    if vec[pivot] < 0:
        vec = -vec
    return sum(c * b for c, b in zip(vec, basis))


def _line_minimize(objective, step0: float = 1e-4, max_angle: float = np.pi) -> float:
    """Deterministic 1-D minimization of `objective(theta)` for theta >= 0.

    Geometric expansion from `step0` brackets the minimum, golden-section
    refines it.  Returns the minimizing angle (possibly 0).
    """
    thetas = [0.0]
    values = [objective(0.0)]
    t = step0
    while t <= max_angle:
        thetas.append(t)
        values.append(objective(t))
        if len(values) >= 3 and values[-1] > values[-2] and values[-2] <= values[0]:
            break
        t *= 2.0
    k = int(np.argmin(values))
    if k == 0:
        return 0.0
    lo = thetas[k - 1]
    hi = thetas[k + 1] if k + 1 < len(thetas) else min(thetas[k] * 2.0, max_angle)
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = objective(c), objective(d)
    for _ in range(120):
        if b - a < 1e-12:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = objective(d)
    return float((a + b) / 2.0)


def saddle_departure(
    node: np.ndarray,
    d_env: int,
    data: AsfCurve,
    rho_sys,
    povm,
    max_rounds: int = 8,
    l1_stop: float | None = None,
) -> np.ndarray:
    """Second-order departure from a stationary start, by best-ray descent.

    Each round probes the cost gradient and Hessian on the unitary tangent
    space and line-minimizes along every candidate ray: the
    descent-gradient ray and each negative-curvature eigenray in both
    orientations.  If some endpoints already match the data to within
    ``l1_stop``, the round moves to the one among them with the least
    environment coupling (the model should carry no more non-Markovianity
    than the data demands); otherwise it moves to the lowest-cost endpoint.
    Rounds stop when the data is matched, no ray improves the cost, or the
    budget runs out.  Deterministic: no randomness enters at any point.
    """
    from .noise import hermitian_expm

    current = node.copy()
    current_cost = cost(current, d_env, data, rho_sys, povm)

    def l1_of(candidate: np.ndarray) -> float:
        pred = predicted_curve(candidate, d_env, rho_sys, povm, data.lengths)
        return float(np.abs(pred - np.asarray(data.means)).sum())

    def coupling_of(candidate: np.ndarray) -> float:
        return diagnose_markovianity(candidate, d_env).off_block_norm

    for _ in range(max_rounds):
        if l1_stop is not None and l1_of(current) <= l1_stop:
            break
        grad, hess, basis = _tangent_probe(current, d_env, data, rho_sys, povm)
        rays = []
        gnorm = float(np.linalg.norm(grad))
        if gnorm > 0.0:
            rays.append(-grad / gnorm)
        w, v = np.linalg.eigh(hess)
        for k in range(len(w)):
            if w[k] < 0.0:
                rays.append(v[:, k])
                rays.append(-v[:, k])
        if not rays:
            break

        endpoints = []
        for coeffs in rays:
            direction = sum(c * b for c, b in zip(coeffs, basis))

            def along(theta: float, _d=direction) -> float:
                if theta == 0.0:
                    return current_cost
                return cost(hermitian_expm(_d, -1j * theta) @ current,
                            d_env, data, rho_sys, povm)

            theta_star = _line_minimize(along)
            if theta_star == 0.0:
                continue
            candidate = hermitian_expm(direction, -1j * theta_star) @ current
            c_val = cost(candidate, d_env, data, rho_sys, povm)
            if c_val < current_cost - 1e-15:
                endpoints.append((c_val, candidate))
        if not endpoints:
            break
        matched = (
            [(c_val, cand) for c_val, cand in endpoints if l1_of(cand) <= l1_stop]
            if l1_stop is not None
            else []
        )
        if matched:
            current_cost, current = min(matched, key=lambda e: coupling_of(e[1]))
        else:
            current_cost, current = min(endpoints, key=lambda e: e[0])
    return current


def _sweep_slot(iteration: int, m_max: int, order: str) -> int:
    n_slots = m_max + 1
    if order == "ascending":
        return 1 + iteration % n_slots
    return n_slots - iteration % n_slots


def sweep_iteration(
    state: LearnerState,
    data: AsfCurve,
    rho_sys,
    povm,
    config: LearnerConfig,
    rng: np.random.Generator,
) -> LearnerState:
    """One full sweep update of the shared node, in place on `state`.

    A zero gradient is a stationary point: the node is left untouched rather
    than run through the split/recombine cycle.
    """
    d_env = config.d_env
    m_max = max(data.lengths)
    slot_i = _sweep_slot(state.iteration, m_max, config.sweep_order)

    grad = gradient_joint(state.node, d_env, data, rho_sys, povm, slot_i)
    if np.abs(grad).max() > 0.0:
        update = optimizer_step(state.accumulators, grad, config.optimizer)
        if config.update_jitter > 0.0:
            noise = rng.standard_normal(update.shape) + 1j * rng.standard_normal(update.shape)
            update = update + config.update_jitter * noise
        d_sys = state.node.shape[0] // d_env
        joint = joint_node(state.node, state.node, d_env, d_sys)
        k = d_env * d_sys * d_sys
        upper, lower = split_truncate((joint + update).reshape(k, k), d_env)
        new_node = replacement_node(upper, lower, near=state.node)
        defect = _unitarity_defect(new_node)
        if defect > config.unitarity_tol:
            raise NumericalError(
                f"updated node violates unitarity ({defect:.3e} > {config.unitarity_tol})"
            )
        state.node = new_node

    state.iteration += 1
    _record(state, data, rho_sys, povm, d_env)
    return state


def _record(state: LearnerState, data: AsfCurve, rho_sys, povm, d_env: int):
    pred = predicted_curve(state.node, d_env, rho_sys, povm, data.lengths)
    resid = pred - np.asarray(data.means)
    c = float(0.5 * np.sum(resid * resid))
    if not np.isfinite(c):
        raise NumericalError(f"cost diverged at iteration {state.iteration}")
    state.cost_trace.append(c)
    state.l1_trace.append(float(np.sum(np.abs(resid))))
    state.unitarity_trace.append(_unitarity_defect(state.node))
    if c < state.best_cost:
        state.best_cost = c
        state.best_node = state.node.copy()
        state.best_iteration = state.iteration


def train(data: AsfCurve, rho_sys, povm, config: LearnerConfig) -> TrainingResult:
    """Run the sweeping algorithm on an ASF curve.

    Starts from the identity node (no noise) with the environment in |0><0|.
    Unless the data is already matched there, the identity is a stationary
    saddle of the cost, so the curvature-probing departure stage positions
    the node first (see :func:`saddle_departure`); iteration counting starts
    after it.  The sweep then iterates until the l1 distance between
    predicted and measured curves drops below (sum of measurement standard
    errors) divided by convergence_divisor, or the iteration budget runs
    out.  The minimum-cost iterate is returned, not the final one, since
    the cost trace is not guaranteed monotone.
    """
    rho_sys = validate_density_matrix(np.asarray(rho_sys, dtype=np.complex128), name="rho_sys")
    povm = validate_povm_element(np.asarray(povm, dtype=np.complex128))
    d_sys = rho_sys.shape[0]
    dim = config.d_env * d_sys
    sigma_total = float(np.sum(np.abs(data.stderrs)))
    # floating-point floor: noiseless curves carry ~1e-16 round-off per point,
    # which would make an exactly-zero l1 target unreachable
    threshold = max(sigma_total / config.convergence_divisor, 1e-10)

    state = LearnerState(
        node=np.eye(dim, dtype=np.complex128),
        accumulators=init_accumulators(
            config.optimizer, (config.d_env, d_sys, d_sys, config.d_env, d_sys, d_sys)
        ),
    )
    rng = np.random.default_rng(config.seed)
    _record(state, data, rho_sys, povm, config.d_env)

    converged = state.l1_trace[-1] <= threshold
    if not converged and config.departure_rounds > 0:
        state.node = saddle_departure(
            state.node, config.d_env, data, rho_sys, povm,
            config.departure_rounds, l1_stop=threshold,
        )
        state.cost_trace.clear()
        state.l1_trace.clear()
        state.unitarity_trace.clear()
        state.best_cost = np.inf
        _record(state, data, rho_sys, povm, config.d_env)
        converged = state.l1_trace[-1] <= threshold
    while not converged and state.iteration < config.max_iterations:
        sweep_iteration(state, data, rho_sys, povm, config, rng)
        converged = state.l1_trace[-1] <= threshold

    best = state.best_node if state.best_node is not None else state.node
    lengths = tuple(data.lengths)
    pred = predicted_curve(best, config.d_env, rho_sys, povm, lengths)
    pred_curve = AsfCurve(
        lengths=lengths,
        means=tuple(float(min(max(v, 0.0), 1.0)) for v in pred),
        stderrs=tuple(0.0 for _ in lengths),
        n_samples=1,
    )
    return TrainingResult(
        node=best,
        predicted=pred_curve,
        cost_trace=tuple(state.cost_trace),
        l1_trace=tuple(state.l1_trace),
        unitarity_trace=tuple(state.unitarity_trace),
        converged=bool(converged),
        iterations=state.iteration,
        best_iteration=state.best_iteration,
    )


# --------------------------------------------------------------------------
# structure diagnosis
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MarkovianityReport:
    markovian: bool
    off_block_norm: float
    system_block: np.ndarray
    tol: float


def diagnose_markovianity(
    node: np.ndarray, d_env: int = 2, rho_env: np.ndarray | None = None, tol: float = 1e-2
) -> MarkovianityReport:
    """Read the Markovianity of a learned node off its block structure.

    With P0 the projector onto the fiducial environment state, the
    off-block norm ||(I - P0 x I) node (P0 x I)||_F measures how much the
    node couples the populated environment level to the rest.  Below `tol`
    the node acts on the system as the (then unitary) fiducial block alone:
    memoryless noise.  The measure is invariant under a global phase.
    """
    node = validate_unitary(node, tol=1e-9, name="noise node")
    dim = node.shape[0]
    if dim % d_env != 0:
        raise ShapeError(f"node dimension {dim} not divisible by d_env {d_env}")
    d_sys = dim // d_env
    if rho_env is None:
        fid = np.zeros(d_env, dtype=np.complex128)
        fid[0] = 1.0
    else:
        rho_env = validate_density_matrix(np.asarray(rho_env, dtype=np.complex128), name="rho_env")
        w, v = np.linalg.eigh(rho_env)
        if w[-1] < 1.0 - 1e-10:
            raise InputError("fiducial environment state must be pure for the block diagnosis")
        fid = v[:, -1]
    embed = np.kron(fid.reshape(-1, 1), np.eye(d_sys, dtype=np.complex128))  # dim x d_sys
    col = node @ embed
    system_block = dagger(embed) @ col
    off = col - embed @ system_block
    off_norm = float(np.linalg.norm(off))
    return MarkovianityReport(
        markovian=off_norm <= tol,
        off_block_norm=off_norm,
        system_block=system_block,
        tol=tol,
    )
