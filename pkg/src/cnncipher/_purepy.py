"""Pure-Python keystream backend.

One Python-level loop iteration per masking byte, so this is the slow
path; the compiled twin in _speed.pyx implements the same contract and
_backend picks one at import time.  The two must produce bit-identical
output, so every floating-point operation here appears in the same order
as in the .pyx file.
"""

import numpy as np

from .errors import StateInvariantError

# Non-zero columns of each weight row: the two ring neighbours and the
# diametrically opposite cell.  This pattern is fixed; only signs evolve.
NEIGHBOURS = tuple(((i + 1) & 7, (i + 7) & 7, (i + 4) & 7) for i in range(8))


def _check_weight_structure(w, rnd):
    for i in range(8):
        row = NEIGHBOURS[i]
        for j in range(8):
            v = w[i * 8 + j]
            if w[j * 8 + i] != v:
                raise StateInvariantError(
                    f"round {rnd}: weight matrix asymmetric at ({i}, {j})"
                )
            if j in row:
                if v != 1 and v != -1:
                    raise StateInvariantError(
                        f"round {rnd}: weight ({i}, {j}) is {v}, expected +-1"
                    )
            elif v != 0:
                raise StateInvariantError(
                    f"round {rnd}: unexpected non-zero weight at ({i}, {j})"
                )


def run_rounds(r, x, cells, weights, out_mask, out_x, validate=False):
    """Advance the cipher state by ``len(out_mask)`` rounds.

    ``cells`` (int8[8]) and ``weights`` (int8[8, 8]) are updated in place;
    ``out_mask`` / ``out_x`` receive each round's XOR mask byte and final
    tent state.  Returns ``(x, stats)`` where ``stats`` is the tuple
    ``(x_min, x_max, sum_abs_min, sum_abs_max)`` in validate mode and
    ``None`` otherwise (extrema are meaningless for zero rounds).
    """
    n = len(out_mask)
    s = [int(v) for v in cells]
    w = [int(v) for v in weights.reshape(-1)]
    nbrs = NEIGHBOURS
    x_min, x_max = 1.0, 0.0
    s_min, s_max = 3, 1
    for k in range(n):
        # Synchronous cell update: every weighted sum uses the old cells.
        new = [0] * 8
        for i in range(8):
            na, nb, nc = nbrs[i]
            base = i * 8
            t = w[base + na] * s[na] + w[base + nb] * s[nb] + w[base + nc] * s[nc]
            if t == 0:
                raise StateInvariantError(f"round {k}: zero weighted sum at cell {i}")
            if validate:
                a = t if t > 0 else -t
                if a != 1 and a != 3:
                    raise StateInvariantError(
                        f"round {k}: weighted sum {t} at cell {i} not odd"
                    )
                if a < s_min:
                    s_min = a
                if a > s_max:
                    s_max = a
            new[i] = 1 if t > 0 else -1
        s = new
        # Eight tent iterations; the 4th fractional binary digit of each
        # state becomes a +-1 control bit.
        e = [0] * 8
        for j in range(8):
            x = r * x if x <= 0.5 else r * (1.0 - x)
            if validate:
                if not 0.0 < x < 1.0:
                    raise StateInvariantError(f"round {k}: tent state {x!r} escaped (0, 1)")
                if x < x_min:
                    x_min = x
                if x > x_max:
                    x_max = x
            e[j] = 1 if int(x * 16.0) & 1 else -1
        mask = 0
        for j in range(8):
            mask = (mask << 1) | (1 if s[j] > 0 else 0)
        # Sign flips where a cell disagrees with its control bit.  An edge
        # between two disagreeing cells is negated twice, i.e. unchanged.
        for i in range(8):
            if s[i] != e[i]:
                for j in nbrs[i]:
                    w[i * 8 + j] = -w[i * 8 + j]
                    w[j * 8 + i] = -w[j * 8 + i]
        if validate:
            _check_weight_structure(w, k)
        out_mask[k] = mask
        out_x[k] = x
    cells[:] = np.asarray(s, dtype=np.int8)
    weights[:] = np.asarray(w, dtype=np.int8).reshape(8, 8)
    if validate:
        return x, (x_min, x_max, s_min, s_max)
    return x, None
