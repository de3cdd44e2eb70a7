# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled longitudinal stepping kernel.

Expression-for-expression identical to ``_pystep.step_longitudinal`` so the
two backends produce bit-identical trajectories; keep both in sync when
touching either.
"""

from libc.math cimport sqrt


def step_longitudinal(
    int[::1] lane,
    double[::1] s,
    double[::1] speed,
    double[::1] length,
    int ego_index,
    double ego_accel,
    double accel_cap,
    double v0,
    double headway,
    double a_max,
    double b_comf,
    double s_jam,
    double dt,
    double[::1] out_s,
    double[::1] out_speed,
    double[::1] out_accel,
):
    cdef int n = s.shape[0]
    cdef double denom = 2.0 * sqrt(a_max * b_comf)
    cdef int i, j, lead
    cdef double acc, ds, lead_ds, v, ratio, r2, free, gap, dynamic, desired, z, v_new

    for i in range(n):
        if i == ego_index:
            acc = ego_accel
        else:
            lead = -1
            lead_ds = 0.0
            for j in range(n):
                if j == i or lane[j] != lane[i]:
                    continue
                ds = s[j] - s[i]
                if ds > 0.0 and (lead < 0 or ds < lead_ds):
                    lead = j
                    lead_ds = ds
            v = speed[i]
            ratio = v / v0
            r2 = ratio * ratio
            free = 1.0 - r2 * r2
            if lead < 0:
                acc = a_max * free
            else:
                gap = lead_ds - 0.5 * (length[lead] + length[i])
                if gap < 0.1:
                    gap = 0.1
                dynamic = v * headway + v * (v - speed[lead]) / denom
                if dynamic < 0.0:
                    dynamic = 0.0
                desired = s_jam + dynamic
                z = desired / gap
                acc = a_max * (free - z * z)
        if acc > accel_cap:
            acc = accel_cap
        elif acc < -accel_cap:
            acc = -accel_cap
        v_new = speed[i] + acc * dt
        if v_new < 0.0:
            v_new = 0.0
        out_speed[i] = v_new
        out_s[i] = s[i] + 0.5 * (speed[i] + v_new) * dt
        out_accel[i] = acc

    collisions = []
    for i in range(n):
        for j in range(i + 1, n):
            if lane[i] != lane[j]:
                continue
            ds = out_s[i] - out_s[j]
            if ds < 0.0:
                ds = -ds
            if ds < 0.5 * (length[i] + length[j]):
                collisions.append((i, j))
    return collisions
