# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled firing kernels; API mirror of ``_kernel_pure``."""

NAME = "cython"


cdef inline bint _enabled(const int[::1] w_in, const int[::1] m,
                          Py_ssize_t t, Py_ssize_t n_places) nogil:
    cdef Py_ssize_t p, base = t * n_places
    cdef int w
    for p in range(n_places):
        w = w_in[base + p]
        if w != 0 and m[p] < w:
            return False
    return True


def is_enabled(const int[::1] w_in, const int[::1] m, Py_ssize_t t, Py_ssize_t n_places):
    return bool(_enabled(w_in, m, t, n_places))


def enabled_indices(const int[::1] w_in, const int[::1] m,
                    Py_ssize_t n_transitions, Py_ssize_t n_places):
    cdef Py_ssize_t t
    out = []
    for t in range(n_transitions):
        if _enabled(w_in, m, t, n_places):
            out.append(t)
    return out


def first_enabled(const int[::1] w_in, const int[::1] m,
                  Py_ssize_t n_transitions, Py_ssize_t n_places):
    cdef Py_ssize_t t
    for t in range(n_transitions):
        if _enabled(w_in, m, t, n_places):
            return t
    return -1


def fire(const int[::1] w_in, const int[::1] w_out, int[::1] m,
         Py_ssize_t t, Py_ssize_t n_places):
    cdef Py_ssize_t p, base = t * n_places
    for p in range(n_places):
        m[p] += w_out[base + p] - w_in[base + p]


def saturate(const int[::1] w_in, const int[::1] w_out, int[::1] m,
             Py_ssize_t n_transitions, Py_ssize_t n_places, Py_ssize_t max_steps):
    cdef Py_ssize_t step, t, p, base
    fired = []
    for step in range(max_steps):
        t = first_enabled_c(w_in, m, n_transitions, n_places)
        if t < 0:
            break
        base = t * n_places
        for p in range(n_places):
            m[p] += w_out[base + p] - w_in[base + p]
        fired.append(t)
    return fired


cdef Py_ssize_t first_enabled_c(const int[::1] w_in, const int[::1] m,
                                Py_ssize_t n_transitions, Py_ssize_t n_places) nogil:
    cdef Py_ssize_t t
    for t in range(n_transitions):
        if _enabled(w_in, m, t, n_places):
            return t
    return -1
