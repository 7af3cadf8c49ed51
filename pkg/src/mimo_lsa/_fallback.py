"""Pure numpy implementations of the hot kernels.

These mirror ``_kernels.pyx`` exactly in semantics and are used whenever the
compiled extension is not importable (or ``MIMO_LSA_PURE_PYTHON`` is set).
"""
import numpy as np

TWO_PI = 2.0 * np.pi


def box_muller(u1, u2):
    """Map uniforms to CN(0, 1) samples.

    ``u1`` must lie in (0, 1]; ``u2`` in [0, 1). Each pair yields one complex
    sample whose squared modulus is Exp(1), so real and imaginary parts are
    independent N(0, 1/2).
    """
    u1 = np.ascontiguousarray(u1, dtype=np.float64)
    u2 = np.ascontiguousarray(u2, dtype=np.float64)
    r = np.sqrt(-np.log(u1))
    theta = TWO_PI * u2
    out = np.empty(u1.shape, dtype=np.complex128)
    out.real = r * np.cos(theta)
    out.imag = r * np.sin(theta)
    return out


def lms_run(c, y_rows, psi, mu, err2, bound):
    """Run LMS steps in place.

    ``c`` (M,) is updated in place; ``y_rows`` is (T, M) with one received
    vector per row; ``err2[t]`` receives the squared a-priori error. Returns
    the index of the first step at which ``||c||`` exceeded ``bound`` or
    became non-finite, or -1 if all steps stayed bounded.
    """
    bound2 = bound * bound
    for t in range(y_rows.shape[0]):
        y = y_rows[t]
        e = psi[t] - np.vdot(c, y)
        err2[t] = e.real * e.real + e.imag * e.imag
        c += (mu[t] * np.conj(e)) * y
        nrm = np.vdot(c, c).real
        if not nrm <= bound2:
            return t
    return -1
