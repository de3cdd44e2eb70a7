"""Pure-Python longitudinal stepping kernel.

The arithmetic here must stay expression-for-expression identical to the
compiled kernel in ``_kernel.pyx``: the two backends are interchangeable
at import time and are required to produce bit-identical trajectories.
"""

from math import sqrt


def step_longitudinal(
    lane,
    s,
    speed,
    length,
    ego_index,
    ego_accel,
    accel_cap,
    v0,
    headway,
    a_max,
    b_comf,
    s_jam,
    dt,
    out_s,
    out_speed,
    out_accel,
):
    """Advance all vehicles one tick along the road.

    NPCs follow the leader in their lane (desired speed ``v0``, time headway
    ``headway``, max accel ``a_max``, comfortable decel ``b_comf``, jam
    distance ``s_jam``); the ego applies ``ego_accel``. All accelerations
    are clipped to ``accel_cap``. Returns the list of same-lane overlap
    pairs (by array index, i < j) present after the move.
    """
    n = len(s)
    denom = 2.0 * sqrt(a_max * b_comf)
    for i in range(n):
        if i == ego_index:
            acc = ego_accel
        else:
            # nearest vehicle ahead in the same lane
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
