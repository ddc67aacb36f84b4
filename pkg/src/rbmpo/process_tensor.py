"""Process-tensor machinery: dense oracles and node-local contractions.

The RB fidelity of one sequence is an inner product of two rank-4(m+2)
tensors: a noise tensor holding the per-slot noise nodes and the fiducial
environment state, and a control tensor holding the gates, the initial system
state and the measurement.  This module provides

* dense constructions of both tensors (and of the 2-design-averaged control
  tensor) plus their full contraction — exponentially large in m, capped at
  ``DENSE_ORACLE_MAX_M``, and kept as the brute-force oracle everything else
  is tested against;
* an efficient evaluation of the averaged fidelity as a chain of small
  environment-system superoperators, linear in sequence length, with the
  option of leaving one *joint node* (two adjacent noise slots fused over
  their environment bond) free.  The fidelity is linear in that free node,
  and :func:`asf_joint_coefficient` returns the coefficient tensor — the
  object the sweeping learner's gradient is made of.

Layout conventions: an operator X on environment x system is stored either
as a dim x dim matrix or as a 4-axis array X[e, s, f, t] = <es|X|ft>.  A
noise node is a 4-axis array node[e_out, s_out, e_in, s_in]; the environment
legs may have unequal sizes mid-contraction (that is how joint nodes with a
free bond are threaded through).  A joint node over slots (i, i-1) is a
6-axis array L[e_up, s_i, s_i', e_dn, s_j, s_j'] whose row-major reshape to
a (d_env d_sys^2) square matrix matches the grouping used by the learner's
SVD split.
"""

from __future__ import annotations

import numpy as np

from .average import NoiseSteps, env_loop_map, env_mixed_map
from .errors import InputError, ResourceLimitError, ShapeError
from .quantum import dagger

#: Largest sequence length the dense tensors are built for (d_sys = 2 keeps
#: each tensor at 2^{4(m+2)} entries, ~268 MB at the cap).
DENSE_ORACLE_MAX_M = 4


# --------------------------------------------------------------------------
# dense oracle
# --------------------------------------------------------------------------

def _node4(op: np.ndarray, d_env: int, d_sys: int) -> np.ndarray:
    return op.reshape(d_env, d_sys, d_env, d_sys)


def _check_dense_cap(m: int):
    if m > DENSE_ORACLE_MAX_M:
        raise ResourceLimitError(
            f"dense process-tensor contraction is capped at m <= {DENSE_ORACLE_MAX_M} "
            f"(requested m = {m}); use the superoperator path for longer sequences"
        )


def dense_noise_tensor(steps: NoiseSteps, m: int) -> np.ndarray:
    """Dense noise tensor for sequence length m.

    Output axes, slot by slot: (s_0, s_0', z_0, z_0', ..., s_{m+1}, s_{m+1}',
    z_{m+1}, z_{m+1}') where s legs come from the node chain and z legs from
    its conjugate.  Kraus slots carry one shared Kraus index per slot.
    """
    _check_dense_cap(m)
    d_env, d_sys = steps.d_env, steps.d_sys
    slot_ops = [steps.prep] + [steps.bulk] * m + [steps.final]
    n_slots = m + 2

    # Integer einsum labels.  Per slot j: ket bond e_j (below) / e_{j+1}
    # (above), bra bond eps_j / eps_{j+1}; top bonds tied together.
    def e(j):
        return j

    def eps(j):
        return n_slots + 1 + j

    top_ket = e(n_slots)
    top_eps = eps(n_slots)
    leg0 = 2 * (n_slots + 1)

    operands = []
    # ket chain: node[e_{j+1}, s_j, e_j, s_j']
    for j, ops in enumerate(slot_ops):
        stack = np.stack([_node4(k, d_env, d_sys) for k in ops])
        kraus_label = leg0 + 4 * n_slots + j
        up = top_ket if j == n_slots - 1 else e(j + 1)
        operands.append(stack)
        operands.append([kraus_label, up, leg0 + 4 * j + 0, e(j), leg0 + 4 * j + 1])
    # fiducial state rho_env[e_0, eps_0]
    operands.append(steps.rho_env)
    operands.append([e(0), eps(0)])
    # bra chain: conj(node)[eps_{j+1}, z_j', eps_j, z_j]
    for j, ops in enumerate(slot_ops):
        stack = np.conj(np.stack([_node4(k, d_env, d_sys) for k in ops]))
        kraus_label = leg0 + 4 * n_slots + j
        up = top_eps if j == n_slots - 1 else eps(j + 1)
        operands.append(stack)
        operands.append([kraus_label, up, leg0 + 4 * j + 3, eps(j), leg0 + 4 * j + 2])
    # tie the two top bonds together via an identity plate
    operands.append(np.eye(d_env, dtype=np.complex128))
    operands.append([top_ket, top_eps])

    out = [leg0 + 4 * j + a for j in range(n_slots) for a in range(4)]
    return np.einsum(*operands, out, optimize="greedy")


def dense_control_tensor(
    gates: list[np.ndarray], rho_sys: np.ndarray, povm: np.ndarray
) -> np.ndarray:
    """Dense control tensor for one specific gate sequence.

    The compiled inverse of the sequence fills the last gate slot; the
    system state and the measurement sit at the chain ends.  Axis order
    matches :func:`dense_noise_tensor`.
    """
    m = len(gates)
    _check_dense_cap(m)
    if m < 1:
        raise InputError("control tensor needs at least one gate")
    d_sys = gates[0].shape[0]
    n_slots = m + 2
    g_hat = np.eye(d_sys, dtype=np.complex128)
    for g in gates:
        g_hat = g @ g_hat

    def s(j):
        return 4 * j + 0

    def sp(j):
        return 4 * j + 1

    def z(j):
        return 4 * j + 2

    def zp(j):
        return 4 * j + 3

    operands = []
    # conj(G_hat)[s_m, s_{m+1}']
    operands.append(np.conj(g_hat))
    operands.append([s(m), sp(m + 1)])
    # G_i[s_i', s_{i-1}] for i = 1..m
    for i, g in enumerate(gates, start=1):
        operands.append(np.asarray(g, dtype=np.complex128))
        operands.append([sp(i), s(i - 1)])
    # rho_sys[s_0', z_0]
    operands.append(np.asarray(rho_sys, dtype=np.complex128))
    operands.append([sp(0), z(0)])
    # conj(G_j)[z_j, z_{j-1}']
    for j, g in enumerate(gates, start=1):
        operands.append(np.conj(np.asarray(g, dtype=np.complex128)))
        operands.append([z(j), zp(j - 1)])
    # G_hat[z_m', z_{m+1}]
    operands.append(g_hat)
    operands.append([zp(m), z(m + 1)])
    # M[z_{m+1}', s_{m+1}]
    operands.append(np.asarray(povm, dtype=np.complex128))
    operands.append([zp(m + 1), s(m + 1)])

    out = [4 * j + a for j in range(n_slots) for a in range(4)]
    return np.einsum(*operands, out, optimize="greedy")


def dense_control_tensor_averaged(
    m: int, d_sys: int, rho_sys: np.ndarray, povm: np.ndarray
) -> np.ndarray:
    """2-design average of the dense control tensor.

    The gate average collapses into a sum of two delta-pattern chains: a
    depolarizing-style term acting per bulk step and a trace term, each with
    its own boundary pattern linking step 0 to step m+1.
    """
    _check_dense_cap(m)
    d = d_sys
    eye = np.eye(d)
    # per bulk step n: factor[s_n, s_n', z_n, z_n']
    f_a = (d * np.einsum("ab,dc->abcd", eye, eye) - np.einsum("ad,bc->abcd", eye, eye))
    f_b = np.einsum("ad,bc->abcd", eye, eye)
    # boundaries over (s_0, z_0', s_{m+1}', z_{m+1})
    b_a = np.einsum("ab,cd->acbd", eye, eye) - np.einsum("ac,bd->acbd", eye, eye) / d
    b_b = np.einsum("ac,bd->acbd", eye, eye) / d

    def assemble(step_factor: np.ndarray, boundary: np.ndarray, norm: float) -> np.ndarray:
        operands = []
        for n in range(1, m + 1):
            operands.append(step_factor)
            operands.append([4 * n + 0, 4 * n + 1, 4 * n + 2, 4 * n + 3])
        operands.append(boundary)
        operands.append([0, 3, 4 * (m + 1) + 1, 4 * (m + 1) + 2])
        operands.append(np.asarray(rho_sys, dtype=np.complex128))
        operands.append([1, 2])
        operands.append(np.asarray(povm, dtype=np.complex128))
        operands.append([4 * (m + 1) + 3, 4 * (m + 1) + 0])
        out = [4 * j + a for j in range(m + 2) for a in range(4)]
        return np.einsum(*operands, out, optimize="greedy") / norm

    alpha = assemble(f_a, b_a, float(d ** m * (d * d - 1) ** m))
    beta = assemble(f_b, b_b, float(d ** m))
    return alpha + beta


def _chain_part(nodes4: list[np.ndarray], d_env: int, d_sys: int) -> np.ndarray:
    """Contract a chain of 4-leg nodes over their shared bonds.

    Input nodes are (up, leg_a, down, leg_b) with the first node's `down`
    and the last node's `up` left open; returns (top, bottom, legs) with the
    per-slot leg pairs flattened in slot order.
    """
    cur = nodes4[0].transpose(0, 2, 1, 3).reshape(d_env, d_env, d_sys * d_sys)
    for node in nodes4[1:]:
        grown = np.einsum("aibj,bfs->afsij", node, cur)
        cur = grown.reshape(d_env, d_env, -1)
    return cur


def _dense_blocks_unitary(steps: NoiseSteps, m: int) -> np.ndarray:
    """Noise tensor with legs grouped as [all s legs | all conjugate legs].

    Unitary slots only.  Same entries as :func:`dense_noise_tensor` up to the
    leg ordering (slot-interleaved there, block-grouped here).
    """
    d_env, d_sys = steps.d_env, steps.d_sys
    slot_ops = [steps.prep] + [steps.bulk] * m + [steps.final]
    kets = [_node4(_single_unitary(ops, "the dense fast path"), d_env, d_sys) for ops in slot_ops]
    ket_part = _chain_part(kets, d_env, d_sys)  # (top, e_0, S)
    bras = [np.conj(k).transpose(0, 3, 2, 1) for k in kets]  # (eps_up, z, eps_dn, z')
    bra_part = _chain_part(bras, d_env, d_sys)  # (top, eps_0, Z)
    return np.einsum("tes,ef,tfz->sz", ket_part, steps.rho_env, bra_part, optimize=True)


def _control_blocks(gates: list[np.ndarray], rho_sys: np.ndarray, povm: np.ndarray) -> np.ndarray:
    """Control tensor with legs grouped as [all s legs | all conjugate legs].

    The gate factors touch only forward legs or only conjugate legs, and the
    two groups couple solely through the state (s_0', z_0) and measurement
    (z_{m+1}', s_{m+1}) matrices, so each side is assembled small and the
    full tensor is one aligned outer product.
    """
    m = len(gates)
    d_sys = gates[0].shape[0]
    n_legs = 2 * (m + 2)
    g_hat = np.eye(d_sys, dtype=np.complex128)
    for g in gates:
        g_hat = g @ g_hat

    def s(j):
        return 2 * j

    def sp(j):
        return 2 * j + 1

    def z(j):
        return n_legs + 2 * j

    def zp(j):
        return n_legs + 2 * j + 1

    s_out = [leg for leg in range(n_legs) if leg != s(m + 1)] + [z(0)]
    side_s = [np.conj(g_hat), [s(m), sp(m + 1)]]
    for i, g in enumerate(gates, start=1):
        side_s += [np.asarray(g, dtype=np.complex128), [sp(i), s(i - 1)]]
    side_s += [np.asarray(rho_sys, dtype=np.complex128), [sp(0), z(0)]]
    half_s = np.einsum(*side_s, s_out, optimize="greedy")

    z_out = [leg for leg in range(n_legs, 2 * n_legs) if leg != z(0)] + [s(m + 1)]
    side_z = [np.asarray(povm, dtype=np.complex128), [zp(m + 1), s(m + 1)]]
    for j, g in enumerate(gates, start=1):
        side_z += [np.conj(np.asarray(g, dtype=np.complex128)), [z(j), zp(j - 1)]]
    side_z += [g_hat, [zp(m), z(m + 1)]]
    half_z = np.einsum(*side_z, z_out, optimize="greedy")

    full = np.einsum(half_s, s_out, half_z, z_out, list(range(2 * n_legs)))
    return full.reshape(d_sys ** n_legs, d_sys ** n_legs)


def contract_asf_dense(
    steps: NoiseSteps, gates: list[np.ndarray], rho_sys: np.ndarray, povm: np.ndarray
) -> float:
    """Survival probability via the full dense tensor contraction.

    Both rank-4(m+2) tensors are materialized (in block leg order, which is
    cheaper to build than the slot-interleaved order but holds the same
    entries) and summed entry by entry against each other.  Equal to
    :func:`rbmpo.rb.run_sequence` on the same inputs; exponentially expensive
    and capped, existing purely as an independent oracle.
    """
    m = len(gates)
    _check_dense_cap(m)
    ups = _dense_blocks_unitary(steps, m)
    ctrl = _control_blocks(gates, rho_sys, povm)
    return float(np.real(np.dot(ups.ravel(), ctrl.ravel())))


def contract_asf_dense_averaged(
    steps: NoiseSteps, m: int, rho_sys: np.ndarray, povm: np.ndarray
) -> float:
    """Averaged fidelity via dense tensors (oracle for the closed form)."""
    ups = dense_noise_tensor(steps, m)
    ctrl = dense_control_tensor_averaged(m, steps.d_sys, rho_sys, povm)
    return float(np.real(np.sum(ups * ctrl)))


# --------------------------------------------------------------------------
# superoperator chain with an optional free joint node
# --------------------------------------------------------------------------

def _single_unitary(ops: tuple[np.ndarray, ...], what: str) -> np.ndarray:
    if len(ops) != 1:
        raise InputError(f"{what} requires a single unitary node, got {len(ops)} Kraus operators")
    return ops[0]


def _raw_apply(ops, x4, d_env, d_sys):
    dim = d_env * d_sys
    x = x4.reshape(dim, dim)
    out = np.zeros_like(x)
    for k in ops:
        out += k @ x @ dagger(k)
    return out.reshape(d_env, d_sys, d_env, d_sys)


def _raw_apply_left(ops, l4, d_env, d_sys):
    dim = d_env * d_sys
    l = l4.reshape(dim, dim)
    out = np.zeros_like(l)
    for k in ops:
        out += k.T @ l @ np.conj(k)
    return out.reshape(d_env, d_sys, d_env, d_sys)


def _twirl_sector_apply(x4, mixed_mat, loop_mat, d_env, d_sys):
    """Apply the 2-design-averaged step: trace sector through the mixed map,
    traceless sector through (loop - mixed)/(d^2 - 1)."""
    t_env = np.einsum("esfs->ef", x4).reshape(-1)
    mix = np.eye(d_sys, dtype=np.complex128).reshape(-1) / d_sys
    block = x4.transpose(0, 2, 1, 3).reshape(d_env * d_env, d_sys * d_sys)
    block = block - np.outer(t_env, mix)
    block = ((loop_mat - mixed_mat) / (d_sys * d_sys - 1)) @ block
    block = block + np.outer(mixed_mat @ t_env, mix)
    return block.reshape(d_env, d_env, d_sys, d_sys).transpose(0, 2, 1, 3)


def _hole_raw(ket, bra, x):
    """One noise slot with explicit (ket, bra) nodes: X -> ket X bra^dag.

    ket: (..., p, s, q, s'), bra: (..., u, s, v, s'), x: (..., q, s, v, s');
    environment leg sizes may differ per argument.
    """
    return np.einsum("...aibj,...bjck,...dlck->...aidl", ket, x, np.conj(bra))


def _hole_twirled(ket, bra, x, d_sys):
    """One 2-design-averaged slot with explicit (ket, bra) nodes."""
    brac = np.conj(bra)
    t_env = np.einsum("...fsgs->...fg", x)
    mix = np.eye(d_sys, dtype=np.complex128) / d_sys
    xt = x - t_env[..., :, None, :, None] * mix[None, :, None, :]
    pound = np.einsum("...etfu,...htgu->...ehfg", ket, brac) / d_sys
    loop = np.einsum("...etft,...hugu->...ehfg", ket, brac)
    tless = (loop - pound) / (d_sys * d_sys - 1)
    out_trace = np.einsum("...ehfg,...fg->...eh", pound, t_env)
    out = out_trace[..., :, None, :, None] * mix[None, :, None, :]
    out = out + np.einsum("...ehfg,...fsgt->...esht", tless, xt)
    return out


def _left_boundary(povm, d_env, d_sys):
    """Functional paired with operators by a plain elementwise sum:
    F(X) = sum l * X  reproduces  tr[(I_env x M) X]."""
    eye = np.eye(d_env, dtype=np.complex128)
    return np.einsum("ef,ts->estf", eye, np.asarray(povm, dtype=np.complex128)).transpose(0, 1, 3, 2)


class _Chain:
    """Shared environment chains for one (steps, rho_sys, povm) context."""

    def __init__(self, steps: NoiseSteps, rho_sys, povm):
        self.steps = steps
        self.d_env, self.d_sys = steps.d_env, steps.d_sys
        self.rho_sys = np.asarray(rho_sys, dtype=np.complex128)
        self.povm = np.asarray(povm, dtype=np.complex128)
        if self.rho_sys.shape != (self.d_sys, self.d_sys):
            raise ShapeError("rho_sys does not match the noise model's system dimension")
        if self.povm.shape != (self.d_sys, self.d_sys):
            raise ShapeError("povm does not match the noise model's system dimension")
        self.mixed = env_mixed_map(steps.bulk, self.d_env, self.d_sys)
        self.loop = env_loop_map(steps.bulk, self.d_env, self.d_sys)
        self.rho0 = np.kron(steps.rho_env, self.rho_sys).reshape(
            self.d_env, self.d_sys, self.d_env, self.d_sys
        )

    def right_env(self, n_bulk: int, with_prep: bool = True) -> np.ndarray:
        """State after the preparation slot and n_bulk averaged bulk slots."""
        x = self.rho0
        if with_prep:
            x = _raw_apply(self.steps.prep, x, self.d_env, self.d_sys)
        for _ in range(n_bulk):
            x = _twirl_sector_apply(x, self.mixed, self.loop, self.d_env, self.d_sys)
        return x

    def left_env(self, n_bulk: int, with_final: bool = True) -> np.ndarray:
        """Measurement functional pulled back through the final slot and
        n_bulk averaged bulk slots."""
        l = _left_boundary(self.povm, self.d_env, self.d_sys)
        if with_final:
            l = _raw_apply_left(self.steps.final, l, self.d_env, self.d_sys)
        for _ in range(n_bulk):
            l = _twirl_sector_apply(l, self.mixed.T, self.loop.T, self.d_env, self.d_sys)
        return l

    def averaged_asf(self, m: int) -> float:
        """Full-slot averaged fidelity (cross-check path for the closed form)."""
        x = self.right_env(m)
        x = _raw_apply(self.steps.final, x, self.d_env, self.d_sys)
        l = _left_boundary(self.povm, self.d_env, self.d_sys)
        return float(np.real(np.sum(l * x)))


def _hole_kinds(slot_i: int, n: int) -> tuple[str, str]:
    lower = "raw" if slot_i - 1 == 0 else "twirled"
    upper = "raw" if slot_i == n + 1 else "twirled"
    return upper, lower


def _apply_hole(kind, ket, bra, x, d_sys):
    if kind == "raw":
        return _hole_raw(ket, bra, x)
    return _hole_twirled(ket, bra, x, d_sys)


def _bra_node(steps: NoiseSteps, slot: int, n: int) -> np.ndarray:
    if slot == 0:
        ops = steps.prep
    elif slot == n + 1:
        ops = steps.final
    else:
        ops = steps.bulk
    op = _single_unitary(ops, "a free joint node")
    return op.reshape(steps.d_env, steps.d_sys, steps.d_env, steps.d_sys)


def _check_slot(slot_i: int, n: int):
    if not 1 <= slot_i <= n + 1:
        raise InputError(f"joint-node slot must satisfy 1 <= i <= n+1, got i={slot_i}, n={n}")


def asf_joint_coefficient(
    steps: NoiseSteps, slot_i: int, n: int, rho_sys, povm
) -> np.ndarray:
    """Coefficient tensor of the averaged fidelity in the joint node at
    slots (slot_i, slot_i - 1) of a length-n sequence.

    Returns T with axes (e_up, s_i, s_i', e_dn, s_j, s_j') such that for any
    joint node L placed at those slots (conjugate transpose chain untouched),
    the averaged fidelity is the inner product sum(L * conj(T)).  T does not
    depend on the current values of the two freed nodes on the forward chain.
    """
    _check_slot(slot_i, n)
    chain = _Chain(steps, rho_sys, povm)
    d_env, d_sys = chain.d_env, chain.d_sys

    r = chain.right_env(max(slot_i - 2, 0), with_prep=slot_i >= 2)
    l = chain.left_env(max(n - slot_i, 0), with_final=slot_i <= n)
    kind_up, kind_dn = _hole_kinds(slot_i, n)
    bra_up = _bra_node(steps, slot_i, n)
    bra_dn = _bra_node(steps, slot_i - 1, n)

    # Basis nodes with a one-dimensional bond: lower node (bond, s_j, e_dn,
    # s_j'), upper node (e_up, s_i, bond, s_i').
    lower_basis = np.zeros((d_sys, d_env, d_sys, 1, d_sys, d_env, d_sys), dtype=np.complex128)
    for sj in range(d_sys):
        for ed in range(d_env):
            for sjp in range(d_sys):
                lower_basis[sj, ed, sjp, 0, sj, ed, sjp] = 1.0
    lower_batch = lower_basis.reshape(-1, 1, d_sys, d_env, d_sys)

    upper_basis = np.zeros((d_env, d_sys, d_sys, d_env, d_sys, 1, d_sys), dtype=np.complex128)
    for eu in range(d_env):
        for si in range(d_sys):
            for sip in range(d_sys):
                upper_basis[eu, si, sip, eu, si, 0, sip] = 1.0
    upper_batch = upper_basis.reshape(-1, d_env, d_sys, 1, d_sys)

    x1 = _apply_hole(kind_dn, lower_batch, bra_dn[None], r[None], d_sys)  # (Q,1,s,e,s)
    x2 = _apply_hole(
        kind_up, upper_batch[:, None], bra_up[None, None], x1[None], d_sys
    )  # (P,Q,e,s,e,s)
    vals = np.einsum("pqesft,esft->pq", x2, l)

    coeff = vals.reshape(d_env, d_sys, d_sys, d_sys, d_env, d_sys)
    coeff = coeff.transpose(0, 1, 2, 4, 3, 5)  # -> (e_up, s_i, s_i', e_dn, s_j, s_j')
    return np.conj(coeff)


def asf_with_joint_node(
    steps: NoiseSteps,
    slot_i: int,
    n: int,
    rho_sys,
    povm,
    joint_ket: np.ndarray,
    joint_bra: np.ndarray | None = None,
) -> float | complex:
    """Averaged fidelity with an explicit joint node at slots (slot_i, slot_i-1).

    ``joint_ket`` replaces the two forward-chain nodes; ``joint_bra`` replaces
    the two conjugate-chain nodes (defaults to the model's own nodes, which
    makes the result linear in ``joint_ket`` and generally complex).  With
    ``joint_bra = conj of joint_ket`` this is the physical, real-valued
    evaluation used by the finite-difference tests.
    """
    _check_slot(slot_i, n)
    chain = _Chain(steps, rho_sys, povm)
    d_env, d_sys = chain.d_env, chain.d_sys

    def factor(joint6: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        joint6 = np.asarray(joint6, dtype=np.complex128)
        if joint6.shape != (d_env, d_sys, d_sys, d_env, d_sys, d_sys):
            raise ShapeError(f"joint node has shape {joint6.shape}")
        bond = d_env * d_sys * d_sys
        upper = np.eye(bond, dtype=np.complex128).reshape(d_env, d_sys, d_sys, bond)
        upper = upper.transpose(0, 1, 3, 2)  # (e_up, s_i, bond, s_i')
        lower = joint6.reshape(bond, d_env, d_sys, d_sys)
        lower = lower.transpose(0, 2, 1, 3)  # (bond, s_j, e_dn, s_j')
        return upper, lower

    ket_up, ket_dn = factor(joint_ket)
    if joint_bra is None:
        bra_up = _bra_node(steps, slot_i, n)
        bra_dn = _bra_node(steps, slot_i - 1, n)
    else:
        bra_up, bra_dn = factor(joint_bra)

    r = chain.right_env(max(slot_i - 2, 0), with_prep=slot_i >= 2)
    l = chain.left_env(max(n - slot_i, 0), with_final=slot_i <= n)
    kind_up, kind_dn = _hole_kinds(slot_i, n)

    x = _apply_hole(kind_dn, ket_dn, bra_dn, r, d_sys)
    x = _apply_hole(kind_up, ket_up, bra_up, x, d_sys)
    value = complex(np.sum(x * l))
    if joint_bra is None:
        return value
    return float(np.real(value))


def joint_node(node_up: np.ndarray, node_dn: np.ndarray, d_env: int, d_sys: int) -> np.ndarray:
    """Fuse two adjacent noise nodes over their shared environment bond."""
    up = node_up.reshape(d_env, d_sys, d_env, d_sys)
    dn = node_dn.reshape(d_env, d_sys, d_env, d_sys)
    return np.einsum("aibj,bkcl->aijckl", up, dn).transpose(0, 1, 2, 3, 4, 5)
