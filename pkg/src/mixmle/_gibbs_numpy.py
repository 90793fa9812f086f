"""Pure numpy Gibbs kernel: the fallback backend.

Vectorises across chains; each chain consumes its own splitmix64 substream
in exactly the order the compiled kernel does (init draws, then one site
draw and one flip draw per update), so results are bit-identical.
"""

import numpy as np

from ._rng import next_uniforms, stream_keys

INIT_UNIFORM = 0
INIT_FIXED = 1
INIT_EMPIRICAL = 2


def run_batch(nbr_idx, nbr_wt, node_field, num_steps, num_chains,
              init_mode, init_rows, master_seed, stream_index, first_chain=0):
    n = nbr_idx.shape[0]
    chains = np.arange(first_chain, first_chain + num_chains, dtype=np.uint64)
    state = stream_keys(master_seed, stream_index, chains)

    if init_mode == INIT_UNIFORM:
        spins = np.empty((num_chains, n), dtype=np.int8)
        for j in range(n):
            u = next_uniforms(state)
            spins[:, j] = np.where(u < 0.5, 1, -1)
    elif init_mode == INIT_FIXED:
        spins = np.repeat(init_rows[:1], num_chains, axis=0).astype(np.int8)
    elif init_mode == INIT_EMPIRICAL:
        u = next_uniforms(state)
        idx = (u * init_rows.shape[0]).astype(np.int64)
        spins = init_rows[idx].astype(np.int8)
    else:
        raise ValueError(f"unknown init mode {init_mode}")

    rows = np.arange(num_chains)
    for _ in range(num_steps):
        sites = (next_uniforms(state) * n).astype(np.int64)
        u = next_uniforms(state)
        neigh = spins[rows[:, None], nbr_idx[sites]].astype(np.float64)
        f = node_field[sites] + (nbr_wt[sites] * neigh).sum(axis=1)
        p_plus = 0.5 + 0.5 * np.tanh(f)
        spins[rows, sites] = np.where(u < p_plus, 1, -1)
    return spins
