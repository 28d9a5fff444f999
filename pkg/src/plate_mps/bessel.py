"""Integer-order Bessel functions J_n and I_n by Miller's downward recurrence.

Both families are computed for all orders ``0..nmax`` at once, which is what
the Fourier-Bessel basis needs: one recurrence sweep per point set.

``J_n`` is normalised with the Neumann sum ``J_0 + 2 * sum_k J_2k = 1`` and
``I_n`` with ``I_0 + 2 * sum_k I_k = exp(z)``.  The latter normalisation
yields the exponentially scaled values ``exp(-z) I_n(z)`` directly, so the
scaled variant never overflows.
"""

import numpy as np

MAX_ORDER = 200
MAX_ARG = 1.0e4

_BIG = 1.0e250
_SEED = 1.0e-30


def _check(nmax, z):
    z = np.asarray(z, dtype=float)
    if nmax < 0:
        raise ValueError(f"order must be non-negative, got {nmax}")
    if nmax > MAX_ORDER:
        raise ValueError(f"order {nmax} exceeds configured limit {MAX_ORDER}")
    if not np.all(np.isfinite(z)):
        raise ValueError("Bessel argument must be finite")
    if np.any(z < 0) or np.any(z > MAX_ARG):
        raise ValueError(f"Bessel argument outside [0, {MAX_ARG:g}]")
    return z


def _start_order(nmax, zmax, modified):
    if modified:
        # I_k/I_0 ~ exp(-k^2 / 2z) for large z
        m = nmax + 20 + int(np.sqrt(40.0 * nmax)) + int(9.0 * np.sqrt(zmax))
    else:
        top = max(nmax, zmax)
        m = int(top) + 20 + int(np.sqrt(40.0 * top))
    return m + (m % 2)


def _miller(nmax, z, modified):
    """Shared downward sweep; returns normalised orders 0..nmax, flattened."""
    flat = z.ravel()
    pos = flat > 0
    x = flat[pos]
    out = np.zeros((nmax + 1, flat.size))
    out[0, ~pos] = 1.0
    if x.size == 0:
        return out

    sign = 1.0 if modified else -1.0
    start = _start_order(nmax, float(x.max()), modified)
    store = np.zeros((nmax + 1, x.size))
    above = np.zeros_like(x)
    cur = np.full_like(x, _SEED)
    total = np.zeros_like(x)
    inv = 2.0 / x
    for k in range(start, 0, -1):
        # cur holds order k, above holds order k+1
        if k <= nmax:
            store[k] = cur
        if modified:
            total += 2.0 * cur
        elif k % 2 == 0:
            total += 2.0 * cur
        below = k * inv * cur + sign * above
        above, cur = cur, below
        big = np.abs(cur) > _BIG
        if np.any(big):
            cur[big] /= _BIG
            above[big] /= _BIG
            total[big] /= _BIG
            store[:, big] /= _BIG
    store[0] = cur
    total += cur
    out[:, pos] = store / total
    return out


def bessel_j_table(nmax, z):
    """Return ``J_0(z) .. J_nmax(z)`` stacked on a new leading axis."""
    z = _check(nmax, z)
    return _miller(nmax, z, modified=False).reshape((nmax + 1,) + z.shape)


def bessel_i_scaled_table(nmax, z):
    """Return ``exp(-z) I_n(z)`` for ``n = 0..nmax`` stacked on a leading axis."""
    z = _check(nmax, z)
    return _miller(nmax, z, modified=True).reshape((nmax + 1,) + z.shape)


def _signed_order(n):
    n = int(n)
    return abs(n), n < 0


def bessel_J(n, z):
    """Bessel function of the first kind ``J_n(z)`` for integer ``n``."""
    m, neg = _signed_order(n)
    val = bessel_j_table(m, z)[m]
    if neg and m % 2:
        val = -val
    return val if val.ndim else float(val)


def bessel_I_scaled(n, z):
    """Exponentially scaled modified Bessel function ``exp(-z) I_n(z)``."""
    m, _ = _signed_order(n)
    val = bessel_i_scaled_table(m, z)[m]
    return val if val.ndim else float(val)


def bessel_I(n, z):
    """Modified Bessel function ``I_n(z)``; overflows to ``inf`` past z ~ 713."""
    z = np.asarray(z, dtype=float)
    with np.errstate(over="ignore"):
        val = bessel_I_scaled(n, z) * np.exp(z)
    return val if np.ndim(val) else float(val)
