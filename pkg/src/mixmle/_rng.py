"""Counter-based per-chain random streams (splitmix64).

Every Gibbs chain owns an independent stream keyed by
(master_seed, stream_index, chain_index), so batches are reproducible and
independent of scheduling, batch size, or backend. The compiled kernel
implements exactly the same construction in C; any change here must be
mirrored there.

Stream definition:
  key   = mix(mix(mix(seed + G) ^ (stream + C1)) ^ (chain + C2))
  state_0 = key;  draw_k: state += G, output mix(state)
  uniform double = (output >> 11) * 2**-53   (in [0, 1))

where G is the 64-bit golden-ratio constant and mix is the splitmix64
finalizer (Stafford mix13).
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_STREAM_TAG = 0xD1B54A32D192ED03
_CHAIN_TAG = 0x8BB84B93962EACC9
_INV_2_53 = 1.0 / 9007199254740992.0


def mix64(z):
    """Splitmix64 finalizer on a python int (mod 2**64)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_key(seed, stream, chain):
    """Starting state for the (seed, stream, chain) substream."""
    k = mix64((seed + GOLDEN) & MASK64)
    k = mix64(k ^ ((stream + _STREAM_TAG) & MASK64))
    k = mix64(k ^ ((chain + _CHAIN_TAG) & MASK64))
    return k


class ScalarStream:
    """Reference (pure python) stream; the kernels must match it exactly."""

    def __init__(self, seed, stream, chain):
        self.state = stream_key(seed, stream, chain)

    def next_uniform(self):
        self.state = (self.state + GOLDEN) & MASK64
        return (mix64(self.state) >> 11) * _INV_2_53


# vectorised variant used by the numpy kernel ------------------------------

def _mix_vec(z):
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def stream_keys(seed, stream, chains):
    """Vector of starting states for chain indices `chains` (uint64 array)."""
    chains = np.asarray(chains, dtype=np.uint64)
    k0 = np.uint64(mix64((seed + GOLDEN) & MASK64))
    k1 = np.uint64(mix64((k0.item() ^ ((stream + _STREAM_TAG) & MASK64)) & MASK64))
    k = _mix_vec(k1 ^ (chains + np.uint64(_CHAIN_TAG)))
    return k


def next_uniforms(state):
    """Advance a uint64 state array in place; return uniforms in [0, 1)."""
    state += np.uint64(GOLDEN)
    return (_mix_vec(state) >> np.uint64(11)) * _INV_2_53
