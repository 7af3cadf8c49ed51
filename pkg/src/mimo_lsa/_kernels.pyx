# cython: language_level=3
"""Compiled hot kernels: Box-Muller sampling and the LMS recursion."""
import numpy as np

from libc.math cimport cos, log, sin, sqrt, M_PI


def box_muller(const double[::1] u1, const double[::1] u2):
    cdef Py_ssize_t n = u1.shape[0]
    if u2.shape[0] != n:
        raise ValueError("u1 and u2 must have equal length")
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    cdef double r, th
    with nogil:
        for i in range(n):
            r = sqrt(-log(u1[i]))
            th = 2.0 * M_PI * u2[i]
            o[i] = r * cos(th) + 1j * (r * sin(th))
    return out


def lms_run(double complex[::1] c, const double complex[:, ::1] y_rows,
            const double complex[::1] psi, const double[::1] mu,
            double[::1] err2, double bound):
    cdef Py_ssize_t T = y_rows.shape[0]
    cdef Py_ssize_t M = y_rows.shape[1]
    cdef Py_ssize_t t, m
    cdef double er, ei, ar, ai, yr, yi, fr, fi, cr, ci, nrm
    cdef double bound2 = bound * bound
    cdef Py_ssize_t hit = -1
    if c.shape[0] != M:
        raise ValueError("filter length does not match received vectors")
    with nogil:
        for t in range(T):
            # a = c^H y
            ar = 0.0
            ai = 0.0
            for m in range(M):
                cr = c[m].real
                ci = c[m].imag
                yr = y_rows[t, m].real
                yi = y_rows[t, m].imag
                ar = ar + (cr * yr + ci * yi)
                ai = ai + (cr * yi - ci * yr)
            er = psi[t].real - ar
            ei = psi[t].imag - ai
            err2[t] = er * er + ei * ei
            # f = mu * conj(e)
            fr = mu[t] * er
            fi = -mu[t] * ei
            nrm = 0.0
            for m in range(M):
                yr = y_rows[t, m].real
                yi = y_rows[t, m].imag
                cr = c[m].real + (fr * yr - fi * yi)
                ci = c[m].imag + (fr * yi + fi * yr)
                c[m] = cr + 1j * ci
                nrm = nrm + (cr * cr + ci * ci)
            if not nrm <= bound2:
                hit = t
                break
    return hit
