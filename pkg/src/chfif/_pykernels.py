"""Pure-Python kernels.

Reference implementation of the two sequential loops.  The compiled module
``_ckernels`` mirrors these functions operation for operation, so both
backends return bit-identical results.
"""

from bisect import bisect_left

import numpy as np

NAME = "python"


def chaos_game(nodes, alpha, beta, gamma, p0, pN, q0, qN, choices, burn_in, x, y, z):
    """Iterate ``omega_{choices[i]}`` from ``(x, y, z)``; keep iterates after ``burn_in``."""
    nodes = [float(v) for v in nodes]
    alpha, beta, gamma = list(map(float, alpha)), list(map(float, beta)), list(map(float, gamma))
    p0, pN, q0, qN = list(map(float, p0)), list(map(float, pN)), list(map(float, q0)), list(map(float, qN))
    x0 = nodes[0]
    width = nodes[-1] - nodes[0]
    total = len(choices)
    keep = max(total - burn_in, 0)
    out_x = np.empty(keep)
    out_y = np.empty(keep)
    out_z = np.empty(keep)
    x, y, z = float(x), float(y), float(z)
    for i, n in enumerate(choices.tolist()):
        w = (x - x0) / width
        ny = alpha[n] * y + beta[n] * z + ((1.0 - w) * p0[n] + w * pN[n])
        nz = gamma[n] * z + ((1.0 - w) * q0[n] + w * qN[n])
        x = (1.0 - w) * nodes[n] + w * nodes[n + 1]
        y = ny
        z = nz
        if i >= burn_in:
            j = i - burn_in
            out_x[j] = x
            out_y[j] = y
            out_z[j] = z
    return out_x, out_y, out_z


def evaluate_batch(xs, depth, nodes, ynodes, znodes, alpha, beta, gamma, p0, pN, q0, qN,
                   seed_err1, seed_err2, step_ulp=0.0, snap_max=0.0):
    """Evaluate ``f = (f1, f2)`` at each abscissa by unwinding the functional equation.

    Each abscissa is pulled back through ``L_n^{-1}`` up to ``depth`` times
    (stopping early on a node hit), seeded with the piecewise-linear
    interpolant of the data, then pushed forward through the ``F_n``.  The
    seed error ``(seed_err1, seed_err2)`` is propagated along the same path.

    Every pull-back adds ``step_ulp`` to a rounding envelope that is also
    stretched by ``1 / |L_n'|``.  While the envelope is at most ``snap_max``,
    a point inside the envelope of a node is taken to be that node.

    Returns arrays ``f1``, ``f2``, ``err1``, ``err2``.
    """
    nodes = [float(v) for v in nodes]
    ynodes = [float(v) for v in ynodes]
    znodes = [float(v) for v in znodes]
    alpha, beta, gamma = list(map(float, alpha)), list(map(float, beta)), list(map(float, gamma))
    p0, pN, q0, qN = list(map(float, p0)), list(map(float, pN)), list(map(float, q0)), list(map(float, qN))
    N = len(nodes) - 1
    x0 = nodes[0]
    xN = nodes[N]
    width = xN - x0
    m = len(xs)
    f1 = np.empty(m)
    f2 = np.empty(m)
    e1_out = np.empty(m)
    e2_out = np.empty(m)
    path_n = [0] * depth
    path_w = [0.0] * depth
    for j, u in enumerate(xs.tolist()):
        steps = 0
        exact = -1
        env = 0.0
        while True:
            i = bisect_left(nodes, u)
            if i <= N and nodes[i] == u:
                exact = i
                break
            if env <= snap_max:
                if i <= N and nodes[i] - u <= env:
                    exact = i
                    break
                if i >= 1 and u - nodes[i - 1] <= env:
                    exact = i - 1
                    break
            if steps == depth:
                break
            # i >= 1 here because u > x0 once it is not a node
            a = nodes[i - 1]
            b = nodes[i]
            w = (u - a) / (b - a)
            u = (1.0 - w) * x0 + w * xN
            env = env * (width / (b - a)) + step_ulp
            if u < x0:
                u = x0
            elif u > xN:
                u = xN
            path_n[steps] = i - 1
            path_w[steps] = (u - x0) / width
            steps += 1
        if exact >= 0:
            v1 = ynodes[exact]
            v2 = znodes[exact]
            e1 = 0.0
            e2 = 0.0
        else:
            i = bisect_left(nodes, u)
            a = nodes[i - 1]
            b = nodes[i]
            w = (u - a) / (b - a)
            v1 = (1.0 - w) * ynodes[i - 1] + w * ynodes[i]
            v2 = (1.0 - w) * znodes[i - 1] + w * znodes[i]
            e1 = seed_err1
            e2 = seed_err2
        for s in range(steps - 1, -1, -1):
            n = path_n[s]
            w = path_w[s]
            t1 = alpha[n] * v1 + beta[n] * v2 + ((1.0 - w) * p0[n] + w * pN[n])
            v2 = gamma[n] * v2 + ((1.0 - w) * q0[n] + w * qN[n])
            v1 = t1
            e1 = abs(alpha[n]) * e1 + abs(beta[n]) * e2
            e2 = abs(gamma[n]) * e2
        f1[j] = v1
        f2[j] = v2
        e1_out[j] = e1
        e2_out[j] = e2
    return f1, f2, e1_out, e2_out
