# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled propagation kernels.

Hot loops of the simulator: per-step Hermitian matrix exponentials via
LAPACK zheevd and cumulative unitary products via straight triple loops.
Matrices are small (8x8), so dense direct loops beat anything clever.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin
from libc.stdlib cimport free, malloc
from scipy.linalg.cython_lapack cimport zheevd

cnp.import_array()

name = "compiled"

ctypedef double complex cplx


def step_unitaries(h_static, h_drive, coeffs, dts):
    """exp(-i*(h_static + coeffs[k]*h_drive)*dts[k]) for every k, stacked."""
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] hs = np.ascontiguousarray(h_static, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] hd = np.ascontiguousarray(h_drive, dtype=np.complex128)
    cdef cnp.ndarray[double, ndim=1, mode="c"] cs = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] ts = np.ascontiguousarray(dts, dtype=np.float64)
    cdef int d = hs.shape[0]
    cdef Py_ssize_t m = cs.shape[0]
    if hs.shape[1] != d or hd.shape[0] != d or hd.shape[1] != d:
        raise ValueError("static and drive matrices must be square and of equal size")
    if ts.shape[0] != m:
        raise ValueError("coeffs and dts must have equal length")

    out = np.empty((m, d, d), dtype=np.complex128)
    cdef cplx[:, :, ::1] uv = out
    cdef cplx[:, ::1] hsv = hs
    cdef cplx[:, ::1] hdv = hd
    cdef double[::1] csv = cs
    cdef double[::1] tsv = ts

    # zheevd workspace sizes for jobz='V' (LAPACK documented minimums).
    cdef int lwork = 2 * d + d * d + 64
    cdef int lrwork = 1 + 5 * d + 2 * d * d + 64
    cdef int liwork = 3 + 5 * d + 64
    cdef cplx* a = <cplx*> malloc(d * d * sizeof(cplx))
    cdef cplx* ph = <cplx*> malloc(d * sizeof(cplx))
    cdef double* w = <double*> malloc(d * sizeof(double))
    cdef cplx* work = <cplx*> malloc(lwork * sizeof(cplx))
    cdef double* rwork = <double*> malloc(lrwork * sizeof(double))
    cdef int* iwork = <int*> malloc(liwork * sizeof(int))
    if a == NULL or ph == NULL or w == NULL or work == NULL or rwork == NULL or iwork == NULL:
        free(a); free(ph); free(w); free(work); free(rwork); free(iwork)
        raise MemoryError()

    cdef char jobz = b"V"
    cdef char uplo = b"L"
    cdef int info = 0
    cdef Py_ssize_t s, bad = -1
    cdef int i, j, k
    cdef double c, dt, ang
    cdef cplx acc
    with nogil:
        for s in range(m):
            c = csv[s]
            dt = tsv[s]
            # Row-major fill; LAPACK reads the buffer column-major, i.e. as
            # the conjugate of a Hermitian matrix, which shares eigenvalues
            # and has conjugated eigenvectors.  The reconstruction below
            # conjugates again, cancelling the flip.
            for i in range(d):
                for j in range(d):
                    a[i * d + j] = hsv[i, j] + c * hdv[i, j]
            zheevd(&jobz, &uplo, &d, a, &d, w, work, &lwork,
                   rwork, &lrwork, iwork, &liwork, &info)
            if info != 0:
                bad = s
                break
            for k in range(d):
                ang = -w[k] * dt
                ph[k] = cos(ang) + 1j * sin(ang)
            for i in range(d):
                for j in range(d):
                    acc = 0
                    for k in range(d):
                        acc = acc + a[i + k * d].conjugate() * ph[k] * a[j + k * d]
                    uv[s, i, j] = acc
    free(a); free(ph); free(w); free(work); free(rwork); free(iwork)
    if bad >= 0:
        raise RuntimeError(f"eigendecomposition failed at step {bad} (zheevd info != 0)")
    return out


def accumulate(units, order, sample_steps):
    """Left-to-right products units[order[k-1]] @ ... @ units[order[0]].

    sample_steps must be ascending step counts in [0, len(order)]; the
    product after zero steps is the identity.  Returns one matrix per
    sample.
    """
    cdef cnp.ndarray[cplx, ndim=3, mode="c"] u = np.ascontiguousarray(units, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] ordv = np.ascontiguousarray(order, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] samp = np.ascontiguousarray(sample_steps, dtype=np.int64)
    cdef int d = u.shape[1]
    cdef Py_ssize_t n = ordv.shape[0]
    cdef Py_ssize_t s_count = samp.shape[0]
    if u.shape[2] != d:
        raise ValueError("unit matrices must be square")
    if n and (np.min(ordv) < 0 or np.max(ordv) >= u.shape[0]):
        raise ValueError("order indexes outside the unit stack")
    if s_count and (np.min(samp) < 0 or np.max(samp) > n or np.any(np.diff(samp) < 0)):
        raise ValueError("sample_steps must be ascending within [0, len(order)]")

    out = np.empty((s_count, d, d), dtype=np.complex128)
    cdef cplx[:, :, ::1] ov = out
    cdef cplx[:, :, ::1] uv = u
    cdef cnp.int64_t[::1] orv = ordv
    cdef cnp.int64_t[::1] smv = samp

    cdef cplx* g = <cplx*> malloc(d * d * sizeof(cplx))
    cdef cplx* tmp = <cplx*> malloc(d * d * sizeof(cplx))
    cdef cplx* swp
    if g == NULL or tmp == NULL:
        free(g); free(tmp)
        raise MemoryError()

    cdef Py_ssize_t pos = 0, si, target, k
    cdef int i, j, l
    cdef cplx acc
    with nogil:
        for i in range(d):
            for j in range(d):
                g[i * d + j] = 1 if i == j else 0
        for si in range(s_count):
            target = smv[si]
            while pos < target:
                k = orv[pos]
                for i in range(d):
                    for j in range(d):
                        acc = 0
                        for l in range(d):
                            acc = acc + uv[k, i, l] * g[l * d + j]
                        tmp[i * d + j] = acc
                swp = g; g = tmp; tmp = swp
                pos += 1
            for i in range(d):
                for j in range(d):
                    ov[si, i, j] = g[i * d + j]
    free(g); free(tmp)
    return out
