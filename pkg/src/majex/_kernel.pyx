# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled state-vector kernels.

Same interface as ``majex._kernel_py``; selected at import by
``majex.backend`` when the extension built successfully.
"""

BACKEND_NAME = "cython"


def apply_1q(double complex[::1] amps, double complex m00, double complex m01,
             double complex m10, double complex m11, int qubit):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t step = 1 << qubit
    cdef Py_ssize_t block = step << 1
    cdef Py_ssize_t base, off
    cdef double complex a0, a1
    for base in range(0, dim, block):
        for off in range(base, base + step):
            a0 = amps[off]
            a1 = amps[off + step]
            amps[off] = m00 * a0 + m01 * a1
            amps[off + step] = m10 * a0 + m11 * a1


def apply_cx(double complex[::1] amps, int control, int target):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t cmask = 1 << control
    cdef Py_ssize_t tmask = 1 << target
    cdef Py_ssize_t i, j
    cdef double complex tmp
    for i in range(dim):
        if (i & cmask) != 0 and (i & tmask) == 0:
            j = i | tmask
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp


def prob_one(double complex[::1] amps, int qubit):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t mask = 1 << qubit
    cdef Py_ssize_t i
    cdef double acc = 0.0
    cdef double re, im
    for i in range(dim):
        if (i & mask) != 0:
            re = amps[i].real
            im = amps[i].imag
            acc += re * re + im * im
    return acc


def collapse(double complex[::1] amps, int qubit, int keep, double inv_norm):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t mask = 1 << qubit
    cdef Py_ssize_t want = mask if keep else 0
    cdef Py_ssize_t i
    for i in range(dim):
        if (i & mask) == want:
            amps[i] = amps[i] * inv_norm
        else:
            amps[i] = 0.0
