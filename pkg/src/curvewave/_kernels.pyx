# cython: boundscheck=False, wraparound=False, cdivision=True
"""Hot gather/scatter loops behind the wedge wrapping transform."""


def wedge_gather(const double complex[::1] spectrum,
                 const long long[::1] support,
                 const double[::1] weights,
                 const long long[::1] wrapped,
                 double complex[::1] out):
    """out[wrapped[i]] = weights[i] * spectrum[support[i]]"""
    cdef Py_ssize_t i, n = support.shape[0]
    with nogil:
        for i in range(n):
            out[wrapped[i]] = weights[i] * spectrum[support[i]]


def wedge_scatter(double complex[::1] spectrum,
                  const long long[::1] support,
                  const double[::1] weights,
                  const long long[::1] wrapped,
                  const double complex[::1] rect):
    """spectrum[support[i]] += weights[i] * rect[wrapped[i]]"""
    cdef Py_ssize_t i, n = support.shape[0]
    with nogil:
        for i in range(n):
            spectrum[support[i]] = spectrum[support[i]] + weights[i] * rect[wrapped[i]]


BACKEND = "cython"
