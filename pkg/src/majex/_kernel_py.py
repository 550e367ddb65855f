"""Pure-numpy state-vector kernels.

Fallback implementation of the hot inner-loop operations; the compiled
Cython module ``majex._kernel`` exposes the same four functions. All
kernels mutate the amplitude array in place. Qubit 0 is the least
significant bit of the basis-state index.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def apply_1q(amps: np.ndarray, m00: complex, m01: complex, m10: complex,
             m11: complex, qubit: int) -> None:
    """Apply a 2x2 matrix (not necessarily unitary) to one qubit."""
    n = amps.shape[0].bit_length() - 1
    view = amps.reshape([2] * n)
    # axes are ordered most-significant first after reshape
    axis = n - 1 - qubit
    sl0 = [slice(None)] * n
    sl1 = [slice(None)] * n
    sl0[axis] = 0
    sl1[axis] = 1
    a0 = view[tuple(sl0)].copy()
    a1 = view[tuple(sl1)]
    view[tuple(sl0)] = m00 * a0 + m01 * a1
    view[tuple(sl1)] = m10 * a0 + m11 * a1


def apply_cx(amps: np.ndarray, control: int, target: int) -> None:
    """Apply CNOT: flip target amplitude blocks where the control bit is 1."""
    n = amps.shape[0].bit_length() - 1
    view = amps.reshape([2] * n)
    c_axis = n - 1 - control
    t_axis = n - 1 - target
    sel10 = [slice(None)] * n
    sel11 = [slice(None)] * n
    sel10[c_axis], sel10[t_axis] = 1, 0
    sel11[c_axis], sel11[t_axis] = 1, 1
    tmp = view[tuple(sel10)].copy()
    view[tuple(sel10)] = view[tuple(sel11)]
    view[tuple(sel11)] = tmp


def prob_one(amps: np.ndarray, qubit: int) -> float:
    """Born probability of reading 1 on the given qubit."""
    n = amps.shape[0].bit_length() - 1
    view = amps.reshape([2] * n)
    axis = n - 1 - qubit
    sl = [slice(None)] * n
    sl[axis] = 1
    branch = view[tuple(sl)]
    return float(np.sum(branch.real ** 2 + branch.imag ** 2))


def collapse(amps: np.ndarray, qubit: int, keep: int, inv_norm: float) -> None:
    """Zero the discarded branch and rescale the kept one by inv_norm."""
    n = amps.shape[0].bit_length() - 1
    view = amps.reshape([2] * n)
    axis = n - 1 - qubit
    sl_drop = [slice(None)] * n
    sl_keep = [slice(None)] * n
    sl_drop[axis] = 1 - keep
    sl_keep[axis] = keep
    view[tuple(sl_drop)] = 0.0
    view[tuple(sl_keep)] *= inv_norm
