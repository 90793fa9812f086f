# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled random-scan Gibbs kernel (hot loop).

Bit-identical to mixmle._gibbs_numpy.run_batch: same per-chain splitmix64
substreams, same draw order, same update rule. Keep the two in lock step.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport tanh

ctypedef unsigned long long u64

cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL
cdef u64 STREAM_TAG = 0xD1B54A32D192ED03ULL
cdef u64 CHAIN_TAG = 0x8BB84B93962EACC9ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline u64 _mix(u64 z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline u64 _stream_key(u64 seed, u64 stream, u64 chain) nogil:
    cdef u64 k = _mix(seed + GOLDEN)
    k = _mix(k ^ (stream + STREAM_TAG))
    k = _mix(k ^ (chain + CHAIN_TAG))
    return k


cdef inline double _next_uniform(u64 *state) nogil:
    state[0] = state[0] + GOLDEN
    return <double>(_mix(state[0]) >> 11) * INV_2_53


def run_batch(int[:, ::1] nbr_idx, double[:, ::1] nbr_wt,
              double[::1] node_field, long num_steps, long num_chains,
              int init_mode, signed char[:, ::1] init_rows,
              u64 master_seed, u64 stream_index, u64 first_chain=0):
    cdef long n = nbr_idx.shape[0]
    cdef long dmax = nbr_idx.shape[1]
    cdef long n_rows = init_rows.shape[0]
    out = np.empty((num_chains, n), dtype=np.int8)
    cdef signed char[:, ::1] spins = out
    cdef long c, t, j, d, site, pick
    cdef u64 state
    cdef double u, f, p_plus

    with nogil:
        for c in range(num_chains):
            state = _stream_key(master_seed, stream_index, first_chain + <u64>c)
            if init_mode == 0:
                for j in range(n):
                    u = _next_uniform(&state)
                    spins[c, j] = 1 if u < 0.5 else -1
            elif init_mode == 1:
                for j in range(n):
                    spins[c, j] = init_rows[0, j]
            else:
                u = _next_uniform(&state)
                pick = <long>(u * n_rows)
                for j in range(n):
                    spins[c, j] = init_rows[pick, j]
            for t in range(num_steps):
                u = _next_uniform(&state)
                site = <long>(u * n)
                f = node_field[site]
                for d in range(dmax):
                    f = f + nbr_wt[site, d] * spins[c, nbr_idx[site, d]]
                p_plus = 0.5 + 0.5 * tanh(f)
                u = _next_uniform(&state)
                spins[c, site] = 1 if u < p_plus else -1
    return out
