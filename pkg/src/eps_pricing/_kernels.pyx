# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled terminal-value sampler. Same algorithm as _kernels_py."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, sqrt
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

DEF MAX_JUMPS = 1024
DEF STRIDE = 3 + MAX_JUMPS

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TWO53 = 1.0 / 9007199254740992.0

cdef double[8] A = [3.3871328727963666080e0, 1.3314166789178437745e2,
    1.9715909503065514427e3, 1.3731693765509461125e4, 4.5921953931549871457e4,
    6.7265770927008700853e4, 3.3430575583588128105e4, 2.5090809287301226727e3]
cdef double[8] B = [1.0, 4.2313330701600911252e1, 6.8718700749205790830e2,
    5.3941960214247511077e3, 2.1213794301586595867e4, 3.9307895800092710610e4,
    2.8729085735721942674e4, 5.2264952788528545610e3]
cdef double[8] C = [1.42343711074968357734e0, 4.63033784615654529590e0,
    5.76949722146069140550e0, 3.64784832476320460504e0, 1.27045825245236838258e0,
    2.41780725177450611770e-1, 2.27238449892691845833e-2, 7.74545014278341407640e-4]
cdef double[8] D = [1.0, 2.05319162663775882187e0, 1.67638483018380384940e0,
    6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9]
cdef double[8] E = [6.65790464350110377720e0, 5.46378491116411436990e0,
    1.78482653991729133580e0, 2.96560571828504891230e-1, 2.65321895265761230930e-2,
    1.24266094738807843860e-3, 2.71155556874348757815e-5, 2.01033439929228813265e-7]
cdef double[8] F = [1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1,
    1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15]


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double uniform(uint64_t key, uint64_t counter) nogil:
    cdef uint64_t x = mix64(key + (counter + 1) * GOLDEN)
    return (<double>(x >> 11) + 0.5) * TWO53


cdef inline double poly(double* c, double r) nogil:
    cdef double acc = c[7]
    cdef int k
    for k in range(6, -1, -1):
        acc = acc * r + c[k]
    return acc


cdef double norm_ppf(double p) nogil:
    cdef double q = p - 0.5
    cdef double r, v
    if q <= 0.425 and q >= -0.425:
        r = 0.180625 - q * q
        return q * poly(A, r) / poly(B, r)
    r = p if q < 0.0 else 1.0 - p
    r = sqrt(-log(r))
    if r <= 5.0:
        r = r - 1.6
        v = poly(C, r) / poly(D, r)
    else:
        r = r - 5.0
        v = poly(E, r) / poly(F, r)
    return -v if q < 0.0 else v


def ppf(double[::1] p):
    out = np.empty(p.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in range(p.shape[0]):
        o[i] = norm_ppf(p[i])
    return out


def sample_block(uint64_t seed, Py_ssize_t start, Py_ssize_t count, double drift,
                 double vol, double jump_mean, double jump_std, int mode,
                 double[::1] cum_table, int64_t fixed_n, double p_zero, bint antithetic):
    x_arr = np.empty(count)
    n_arr = np.empty(count, dtype=np.int64)
    d_arr = np.empty(count)
    cdef double[::1] x = x_arr
    cdef int64_t[::1] n_out = n_arr
    cdef double[::1] u_def = d_arr
    cdef uint64_t key = mix64(seed)
    cdef Py_ssize_t i, last = cum_table.shape[0] - 1
    cdef uint64_t idx, base
    cdef bint mirror
    cdef double u, value
    cdef int64_t n, k
    with nogil:
        for i in range(count):
            idx = <uint64_t>(start + i)
            if antithetic:
                base = (idx >> 1) * STRIDE
                mirror = (idx & 1) == 1
            else:
                base = idx * STRIDE
                mirror = False
            u = uniform(key, base)
            if mirror:
                u = 1.0 - u
            value = drift + vol * norm_ppf(u)
            u = uniform(key, base + 1)
            if mode == 0:
                n = 0
                while n < last and u > cum_table[n]:
                    n += 1
            elif mode == 1:
                n = fixed_n
            else:
                n = 1 if u >= p_zero else 0
            for k in range(n):
                u = uniform(key, base + 3 + k)
                if mirror:
                    u = 1.0 - u
                value += jump_mean + jump_std * norm_ppf(u)
            x[i] = value
            n_out[i] = n
            u_def[i] = uniform(key, base + 2)
    return x_arr, n_arr, d_arr
