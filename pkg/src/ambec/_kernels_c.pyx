# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled nonlinear substep kernel; semantics match _kernels_py."""

import numpy as np

cimport cython

cdef double SQRT2 = 1.4142135623730951


@cython.boundscheck(False)
@cython.wraparound(False)
def nonlinear_step(psi_a, psi_m, double dt, double g_a, double g_m,
                   double g_am, double alpha, double epsilon):
    """Advance the local nonlinear+coupling flow by dt with classical RK4.

    Same contract as the pure-python kernel: returns new arrays, inputs
    untouched.
    """
    cdef double complex[::1] pa = np.ascontiguousarray(psi_a, dtype=np.complex128)
    cdef double complex[::1] pm = np.ascontiguousarray(psi_m, dtype=np.complex128)
    cdef Py_ssize_t n = pa.shape[0]
    out_a = np.empty(n, dtype=np.complex128)
    out_m = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] oa = out_a
    cdef double complex[::1] om = out_m

    cdef Py_ssize_t i
    cdef double complex a, m, a1, m1, a2, m2, a3, m3, a4, m4, ta, tm
    cdef double na, nm, half = 0.5 * dt, sixth = dt / 6.0
    cdef double complex minus_i = -1j
    cdef double c_am = SQRT2 * alpha, c_aa = alpha / SQRT2

    for i in range(n):
        a = pa[i]
        m = pm[i]

        na = a.real * a.real + a.imag * a.imag
        nm = m.real * m.real + m.imag * m.imag
        a1 = minus_i * ((g_a * na + g_am * nm) * a + c_am * m * a.conjugate())
        m1 = minus_i * ((epsilon + g_m * nm + g_am * na) * m + c_aa * a * a)

        ta = a + half * a1
        tm = m + half * m1
        na = ta.real * ta.real + ta.imag * ta.imag
        nm = tm.real * tm.real + tm.imag * tm.imag
        a2 = minus_i * ((g_a * na + g_am * nm) * ta + c_am * tm * ta.conjugate())
        m2 = minus_i * ((epsilon + g_m * nm + g_am * na) * tm + c_aa * ta * ta)

        ta = a + half * a2
        tm = m + half * m2
        na = ta.real * ta.real + ta.imag * ta.imag
        nm = tm.real * tm.real + tm.imag * tm.imag
        a3 = minus_i * ((g_a * na + g_am * nm) * ta + c_am * tm * ta.conjugate())
        m3 = minus_i * ((epsilon + g_m * nm + g_am * na) * tm + c_aa * ta * ta)

        ta = a + dt * a3
        tm = m + dt * m3
        na = ta.real * ta.real + ta.imag * ta.imag
        nm = tm.real * tm.real + tm.imag * tm.imag
        a4 = minus_i * ((g_a * na + g_am * nm) * ta + c_am * tm * ta.conjugate())
        m4 = minus_i * ((epsilon + g_m * nm + g_am * na) * tm + c_aa * ta * ta)

        oa[i] = a + sixth * (a1 + 2.0 * (a2 + a3) + a4)
        om[i] = m + sixth * (m1 + 2.0 * (m2 + m3) + m4)

    return out_a, out_m
