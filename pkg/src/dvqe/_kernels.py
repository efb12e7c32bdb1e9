"""In-place gate kernels on state stacks shaped ``(batch, 2**n)``.

Qubit ``q`` has stride ``2**(n - q - 1)`` (qubit 0 is the most significant bit).
"""

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def apply_1q(psi, n, qubit, U):
    """``U`` is shaped (batch or 1, 2, 2); a single matrix is shared by every row."""
    stride = 1 << (n - qubit - 1)
    blocks = psi.shape[1] // (2 * stride)
    shared = U.shape[0] == 1
    for b in range(psi.shape[0]):
        k = 0 if shared else b
        u00, u01, u10, u11 = U[k, 0, 0], U[k, 0, 1], U[k, 1, 0], U[k, 1, 1]
        for blk in range(blocks):
            base = blk * 2 * stride
            for i in range(base, base + stride):
                x0 = psi[b, i]
                x1 = psi[b, i + stride]
                psi[b, i] = u00 * x0 + u01 * x1
                psi[b, i + stride] = u10 * x0 + u11 * x1


@numba.njit(cache=True, nogil=True)
def apply_cnot(psi, n, control, target):
    cmask = 1 << (n - control - 1)
    tmask = 1 << (n - target - 1)
    for b in range(psi.shape[0]):
        for i in range(psi.shape[1]):
            if (i & cmask) and not (i & tmask):
                j = i | tmask
                psi[b, i], psi[b, j] = psi[b, j], psi[b, i]


@numba.njit(cache=True, nogil=True)
def apply_cz(psi, n, a, b_):
    mask = (1 << (n - a - 1)) | (1 << (n - b_ - 1))
    for b in range(psi.shape[0]):
        for i in range(psi.shape[1]):
            if i & mask == mask:
                psi[b, i] = -psi[b, i]


@numba.njit(cache=True, nogil=True)
def excited_probability(psi, n, qubit):
    """Largest (over batch rows) probability of reading ``qubit`` as 1."""
    mask = 1 << (n - qubit - 1)
    worst = 0.0
    for b in range(psi.shape[0]):
        total = 0.0
        for i in range(psi.shape[1]):
            if i & mask:
                total += abs(psi[b, i]) ** 2
        worst = max(worst, total)
    return worst


def as_gate_stack(U) -> np.ndarray:
    U = np.asarray(U)
    return U.reshape(1, 2, 2) if U.ndim == 2 else U
