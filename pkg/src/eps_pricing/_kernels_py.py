"""Numpy implementation of the terminal-value sampler.

Mirrors ``_kernels.pyx`` operation for operation. Random numbers come from
a counter-based generator: uniform number ``slot`` of path ``i`` is a
splitmix64 hash of (seed, i * STRIDE + slot), so any block of paths can
be generated independently and conditioning never shifts the stream.

Slots: 0 diffusion normal, 1 jump-count uniform, 2 default uniform,
3.. jump-size normals.
"""

import numpy as np

MAX_JUMPS = 1024
STRIDE = 3 + MAX_JUMPS
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TWO53 = 2.0**-53

MODE_POISSON, MODE_FIXED, MODE_AT_MOST_ONE = 0, 1, 2

_A = (3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
      1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3)
_B = (1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
      2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
      5.2264952788528545610e3)
_C = (1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
      3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4)
_D = (1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
      1.05075007164441684324e-9)
_E = (6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7)
_F = (1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
      2.04426310338993978564e-15)


def mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def seed_key(seed):
    return mix64(np.array([seed], dtype=np.uint64))[0]


def uniforms(key, counters):
    """Open-interval uniforms for an array of uint64 counters."""
    x = mix64(key + (counters + np.uint64(1)) * GOLDEN)
    return ((x >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO53


def _poly(coef, r):
    acc = np.full_like(r, coef[7])
    for c in coef[6::-1]:
        acc = acc * r + c
    return acc


def norm_ppf(p):
    """Inverse normal cdf, Wichura's AS241 (about 1e-16 relative error)."""
    p = np.asarray(p, dtype=np.float64)
    q = p - 0.5
    out = np.empty_like(p)
    central = np.abs(q) <= 0.425
    if central.any():
        qc = q[central]
        r = 0.180625 - qc * qc
        out[central] = qc * _poly(_A, r) / _poly(_B, r)
    tail = ~central
    if tail.any():
        qt = q[tail]
        r = np.where(qt < 0.0, p[tail], 1.0 - p[tail])
        r = np.sqrt(-np.log(r))
        near = r <= 5.0
        v = np.empty_like(r)
        rn = r[near] - 1.6
        v[near] = _poly(_C, rn) / _poly(_D, rn)
        rf = r[~near] - 5.0
        v[~near] = _poly(_E, rf) / _poly(_F, rf)
        out[tail] = np.where(qt < 0.0, -v, v)
    return out


def sample_block(seed, start, count, drift, vol, jump_mean, jump_std, mode,
                 cum_table, fixed_n, p_zero, antithetic):
    """Log-returns, jump counts and default uniforms for paths start..start+count."""
    key = seed_key(seed)
    idx = np.arange(start, start + count, dtype=np.uint64)
    if antithetic:
        base = (idx >> np.uint64(1)) * np.uint64(STRIDE)
        mirror = (idx & np.uint64(1)).astype(bool)
    else:
        base = idx * np.uint64(STRIDE)
        mirror = np.zeros(count, dtype=bool)

    def mirrored(slot):
        u = uniforms(key, base + np.uint64(slot))
        return np.where(mirror, 1.0 - u, u)

    z = norm_ppf(mirrored(0))
    u_count = uniforms(key, base + np.uint64(1))
    u_default = uniforms(key, base + np.uint64(2))

    if mode == MODE_POISSON:
        n = np.searchsorted(cum_table, u_count, side="left")
        n = np.minimum(n, len(cum_table) - 1).astype(np.int64)
    elif mode == MODE_FIXED:
        n = np.full(count, fixed_n, dtype=np.int64)
    else:
        n = (u_count >= p_zero).astype(np.int64)

    x = drift + vol * z
    top = int(n.max()) if count else 0
    for k in range(top):
        sel = n > k
        u = uniforms(key, base[sel] + np.uint64(3 + k))
        u = np.where(mirror[sel], 1.0 - u, u)
        x[sel] += jump_mean + jump_std * norm_ppf(u)
    return x, n, u_default
