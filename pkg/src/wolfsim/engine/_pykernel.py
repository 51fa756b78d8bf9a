"""NumPy reference implementation of the propagation kernels.

Same contract as the compiled kernel: step_unitaries builds one-step
matrix exponentials by Hermitian eigendecomposition, accumulate chains
them into cumulative products sampled at requested step counts.
"""

import numpy as np

name = "python"


def step_unitaries(h_static, h_drive, coeffs, dts):
    """exp(-i*(h_static + coeffs[k]*h_drive)*dts[k]) for every k, stacked."""
    h_static = np.asarray(h_static, dtype=np.complex128)
    h_drive = np.asarray(h_drive, dtype=np.complex128)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    dts = np.asarray(dts, dtype=np.float64)
    h = h_static[None, :, :] + coeffs[:, None, None] * h_drive[None, :, :]
    energies, vectors = np.linalg.eigh(h)
    phases = np.exp(-1j * energies * dts[:, None])
    return np.einsum("mik,mk,mjk->mij", vectors, phases, vectors.conj(), optimize=True)


def accumulate(units, order, sample_steps):
    """Left-to-right products units[order[k-1]] @ ... @ units[order[0]].

    sample_steps must be ascending step counts in [0, len(order)]; the
    product after zero steps is the identity.  Returns one matrix per
    sample.
    """
    units = np.asarray(units, dtype=np.complex128)
    order = np.asarray(order, dtype=np.int64)
    sample_steps = np.asarray(sample_steps, dtype=np.int64)
    d = units.shape[1]
    out = np.empty((sample_steps.size, d, d), dtype=np.complex128)
    g = np.eye(d, dtype=np.complex128)
    pos = 0
    for i, target in enumerate(sample_steps):
        while pos < target:
            g = units[order[pos]] @ g
            pos += 1
        out[i] = g
    return out
