# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels, bit-identical to the numpy fallback in _kernels_py.

Uniforms come straight from the PCG64 bit generator's next_double — the same
values Generator.random produces — consumed in the documented per-vertex
order, so compiled and fallback runs are interchangeable mid-stream.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from numpy.random cimport bitgen_t

cnp.import_array()

BACKEND = "compiled"


cdef bitgen_t *_bitgen(object gen) except NULL:
    capsule = gen.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("expected a numpy Generator backed by a BitGenerator capsule")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


def pa1_targets(Py_ssize_t n, double delta, object gen):
    """Targets (1-based) of the n single-edge attachment steps; 2 uniforms per
    step for delta >= 0, 1 plus a linear weight scan for -1 < delta < 0."""
    cdef cnp.ndarray targets_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] targets = targets_arr
    targets[0] = 1
    if n == 1:
        return targets_arr
    cdef bitgen_t *rng = _bitgen(gen)
    cdef object lock = gen.bit_generator.lock
    cdef double one_plus = 1.0 + delta
    cdef double den, x, u2, acc
    cdef Py_ssize_t v, s, j, i, target
    cdef cnp.int64_t[::1] endpoints
    cdef double[::1] deg

    if delta >= 0.0:
        endpoints = np.empty(2 * n, dtype=np.int64)
        endpoints[0] = 1
        endpoints[1] = 1
        with lock, nogil:
            for v in range(2, n + 1):
                s = v - 1
                den = s * (2.0 + delta) + one_plus
                x = rng.next_double(rng.state) * den
                u2 = rng.next_double(rng.state)
                if x < one_plus:
                    target = v
                elif x < one_plus + 2.0 * s:
                    j = <Py_ssize_t>(u2 * (2.0 * s))
                    if j >= 2 * s:
                        j = 2 * s - 1
                    target = endpoints[j]
                else:
                    j = <Py_ssize_t>(u2 * <double>s)
                    if j >= s:
                        j = s - 1
                    target = j + 1
                targets[v - 1] = target
                endpoints[2 * s] = v
                endpoints[2 * s + 1] = target
        return targets_arr

    deg = np.zeros(n + 1, dtype=np.float64)
    deg[1] = 2.0
    with lock, nogil:
        for v in range(2, n + 1):
            s = v - 1
            den = s * (2.0 + delta) + (1.0 + delta)
            x = rng.next_double(rng.state) * den
            target = v
            acc = 0.0
            for i in range(1, s + 1):
                acc += deg[i] + delta
                if x < acc:
                    target = i
                    break
            targets[v - 1] = target
            deg[target] += 1.0
            deg[v] += 1.0
    return targets_arr


def mpk_step(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] endpoints,
             const cnp.uint8_t[::1] colours, Py_ssize_t k, object gen):
    """One synchronous k-sample majority round over CSR slots (see fallback)."""
    cdef Py_ssize_t t = indptr.shape[0] - 1
    cdef cnp.ndarray out_arr = np.empty(t, dtype=np.uint8)
    cdef cnp.uint8_t[::1] out = out_arr
    cdef Py_ssize_t maxdeg = 0, v, lo, n, i, j, size, red
    cdef cnp.int64_t tmp
    for v in range(t):
        if indptr[v + 1] - indptr[v] > maxdeg:
            maxdeg = indptr[v + 1] - indptr[v]
    cdef cnp.int64_t[::1] sbuf = np.empty(max(maxdeg, 1), dtype=np.int64)
    cdef bitgen_t *rng = _bitgen(gen)
    cdef object lock = gen.bit_generator.lock
    cdef double u

    with lock, nogil:
        for v in range(t):
            lo = indptr[v]
            n = indptr[v + 1] - lo
            if n >= k:
                size = k
                for i in range(n):
                    sbuf[i] = endpoints[lo + i]
                for i in range(k):
                    u = rng.next_double(rng.state)
                    j = <Py_ssize_t>(u * <double>(n - i))
                    if j > n - i - 1:
                        j = n - i - 1
                    j += i
                    tmp = sbuf[i]
                    sbuf[i] = sbuf[j]
                    sbuf[j] = tmp
                red = 0
                for i in range(k):
                    red += colours[sbuf[i]]
            elif n % 2 == 1:
                size = n
                red = 0
                for i in range(n):
                    red += colours[endpoints[lo + i]]
            else:
                size = n - 1
                u = rng.next_double(rng.state)
                j = <Py_ssize_t>(u * <double>n)
                if j > n - 1:
                    j = n - 1
                red = 0
                for i in range(n):
                    red += colours[endpoints[lo + i]]
                red -= colours[endpoints[lo + j]]
            out[v] = 1 if 2 * red > size else 0
    return out_arr


def voter_step(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] endpoints,
               const cnp.uint8_t[::1] colours, object gen):
    """One synchronous single-sample round: each vertex copies a uniform slot."""
    cdef Py_ssize_t t = indptr.shape[0] - 1
    cdef cnp.ndarray out_arr = np.empty(t, dtype=np.uint8)
    cdef cnp.uint8_t[::1] out = out_arr
    cdef bitgen_t *rng = _bitgen(gen)
    cdef object lock = gen.bit_generator.lock
    cdef Py_ssize_t v, lo, n, j
    cdef double u

    with lock, nogil:
        for v in range(t):
            lo = indptr[v]
            n = indptr[v + 1] - lo
            u = rng.next_double(rng.state)
            j = <Py_ssize_t>(u * <double>n)
            if j > n - 1:
                j = n - 1
            out[v] = colours[endpoints[lo + j]]
    return out_arr
