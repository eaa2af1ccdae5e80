# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) integrator for the core amplitudes.

Mirrors stepper_np.integrate_amplitudes exactly: same tableau, same
step-control constants, same sampling and early-stop semantics. The
right-hand side is hard-coded for the ten-component transfer chain.
"""

from libc.math cimport exp, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef double complex zdouble

cdef int NDIM = 10

cdef double C2 = 0.2
cdef double C3 = 0.3
cdef double C4 = 0.8
cdef double C5 = 8.0 / 9.0
cdef double A21 = 0.2
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0
cdef double A63 = 46732.0 / 5247.0, A64 = 49.0 / 176.0
cdef double A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0

cdef long MAX_STEPS = 20000000


cdef inline double cabs2(zdouble z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline void rhs(double t, zdouble* y, zdouble* dy,
                     zdouble p_dc, zdouble p_tr, zdouble p_pc,
                     zdouble A, zdouble B, zdouble C, zdouble D,
                     zdouble Ac, zdouble Bc, zdouble Cc, zdouble Dc,
                     zdouble alpha, zdouble beta, zdouble drive_coef,
                     double dw, double tc) nogil:
    cdef double arg = dw * (t - tc)
    cdef zdouble drive = drive_coef * exp(-0.5 * arg * arg)
    cdef zdouble I = 1j
    dy[0] = -p_dc * y[0] + alpha * drive
    dy[1] = -p_dc * y[1] + beta * drive
    dy[2] = -p_dc * y[2] - alpha * drive
    dy[3] = -p_dc * y[3] - beta * drive
    dy[4] = -p_tr * y[4] - I * (A * y[6] + B * y[7]) - I * (C * y[0] + D * y[1])
    dy[5] = -p_tr * y[5] + I * (Bc * y[8] + Ac * y[9]) + I * (Dc * y[2] + Cc * y[3])
    dy[6] = -p_pc * y[6] - I * Ac * y[4]
    dy[7] = -p_pc * y[7] - I * Bc * y[4]
    dy[8] = -p_pc * y[8] + I * B * y[5]
    dy[9] = -p_pc * y[9] + I * A * y[5]


def integrate_amplitudes(y0, double t0, double t_end, double dt_init,
                         double dt_max, double rel_tol, double abs_tol,
                         double d_dc, double kappa, double d_tr,
                         double gamma_total, double d_pc, double gamma_pc,
                         A, B, C, D, alpha, beta, drive_coef,
                         double dw, double tc,
                         sample_ts, double core_stop, double t_pulse_end):
    """Compiled twin of stepper_np.integrate_amplitudes; same contract."""
    cdef zdouble cA = A, cB = B, cC = C, cD = D
    cdef zdouble cAc = cA.conjugate(), cBc = cB.conjugate()
    cdef zdouble cCc = cC.conjugate(), cDc = cD.conjugate()
    cdef zdouble calpha = alpha, cbeta = beta, cdrive = drive_coef
    cdef zdouble p_dc = d_dc * 1j + kappa
    cdef zdouble p_tr = d_tr * 1j + gamma_total
    cdef zdouble p_pc = d_pc * 1j + gamma_pc

    y_arr = np.array(y0, dtype=complex)
    if y_arr.shape != (10,):
        raise ValueError(f"state must have shape (10,), got {y_arr.shape}")
    ts_arr = np.ascontiguousarray(sample_ts, dtype=float)
    cdef double[::1] ts = ts_arr
    cdef Py_ssize_t n_samples = ts.shape[0]
    samples_arr = np.empty((n_samples, 10), dtype=complex)
    cdef zdouble[:, ::1] samples = samples_arr
    cdef zdouble[::1] yv = y_arr

    cdef zdouble y[10]
    cdef zdouble y_new[10]
    cdef zdouble stage[10]
    cdef zdouble k1[10]
    cdef zdouble k2[10]
    cdef zdouble k3[10]
    cdef zdouble k4[10]
    cdef zdouble k5[10]
    cdef zdouble k6[10]
    cdef zdouble k7[10]
    cdef Py_ssize_t i, next_i = 0
    for i in range(NDIM):
        y[i] = yv[i]

    cdef double t = t0
    cdef double tiny = 1e-12 * max(t_end - t0, 1.0)
    while next_i < n_samples and ts[next_i] <= t + tiny:
        for i in range(NDIM):
            samples[next_i, i] = y[i]
        next_i += 1

    cdef double dt = min(dt_init, dt_max)
    cdef int status = 0
    cdef long n_steps = 0, n_rejected = 0
    cdef double h, err, sc, acc, factor, core
    cdef zdouble ev

    rhs(t, y, k1, p_dc, p_tr, p_pc, cA, cB, cC, cD, cAc, cBc, cCc, cDc,
        calpha, cbeta, cdrive, dw, tc)

    while t < t_end - tiny:
        if n_steps + n_rejected > MAX_STEPS:
            status = 3
            break
        h = dt
        if dt_max < h:
            h = dt_max
        if t_end - t < h:
            h = t_end - t
        if next_i < n_samples and ts[next_i] - t < h:
            h = ts[next_i] - t
        if h < tiny * 1e-2:
            status = 2
            break

        for i in range(NDIM):
            stage[i] = y[i] + h * (A21 * k1[i])
        rhs(t + C2 * h, stage, k2, p_dc, p_tr, p_pc, cA, cB, cC, cD,
            cAc, cBc, cCc, cDc, calpha, cbeta, cdrive, dw, tc)
        for i in range(NDIM):
            stage[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
        rhs(t + C3 * h, stage, k3, p_dc, p_tr, p_pc, cA, cB, cC, cD,
            cAc, cBc, cCc, cDc, calpha, cbeta, cdrive, dw, tc)
        for i in range(NDIM):
            stage[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
        rhs(t + C4 * h, stage, k4, p_dc, p_tr, p_pc, cA, cB, cC, cD,
            cAc, cBc, cCc, cDc, calpha, cbeta, cdrive, dw, tc)
        for i in range(NDIM):
            stage[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i]
                                   + A54 * k4[i])
        rhs(t + C5 * h, stage, k5, p_dc, p_tr, p_pc, cA, cB, cC, cD,
            cAc, cBc, cCc, cDc, calpha, cbeta, cdrive, dw, tc)
        for i in range(NDIM):
            stage[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i]
                                   + A64 * k4[i] + A65 * k5[i])
        rhs(t + h, stage, k6, p_dc, p_tr, p_pc, cA, cB, cC, cD,
            cAc, cBc, cCc, cDc, calpha, cbeta, cdrive, dw, tc)
        for i in range(NDIM):
            y_new[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i]
                                   + B5 * k5[i] + B6 * k6[i])
        rhs(t + h, y_new, k7, p_dc, p_tr, p_pc, cA, cB, cC, cD,
            cAc, cBc, cCc, cDc, calpha, cbeta, cdrive, dw, tc)

        acc = 0.0
        for i in range(NDIM):
            ev = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                      + E6 * k6[i] + E7 * k7[i])
            sc = abs_tol + rel_tol * max(sqrt(cabs2(y[i])), sqrt(cabs2(y_new[i])))
            acc += cabs2(ev) / (sc * sc)
        err = sqrt(acc / NDIM)

        if err <= 1.0:
            t = t + h
            for i in range(NDIM):
                y[i] = y_new[i]
                k1[i] = k7[i]
            n_steps += 1
            while next_i < n_samples and ts[next_i] <= t + tiny:
                for i in range(NDIM):
                    samples[next_i, i] = y[i]
                next_i += 1
            if core_stop > 0.0 and t > t_pulse_end:
                core = 0.0
                for i in range(NDIM):
                    core += cabs2(y[i])
                if core < core_stop:
                    status = 1
                    break
        else:
            n_rejected += 1
        if err > 0.0:
            factor = 0.9 * err ** -0.2
        else:
            factor = 5.0
        if factor > 5.0:
            factor = 5.0
        elif factor < 0.2:
            factor = 0.2
        dt = h * factor

    while next_i < n_samples:
        for i in range(NDIM):
            samples[next_i, i] = y[i]
        next_i += 1
    return samples_arr, status, n_steps, n_rejected, t
