# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled keystream backend; mirrors _purepy.run_rounds exactly.

Built without -ffast-math on purpose: both backends must emit
bit-identical keystreams (same IEEE-754 operation sequence).
"""

from .errors import StateInvariantError

cdef Py_ssize_t NB[8][3]
cdef signed char CANON[8][8]
cdef Py_ssize_t _i, _j
for _i in range(8):
    NB[_i][0] = (_i + 1) & 7
    NB[_i][1] = (_i + 7) & 7
    NB[_i][2] = (_i + 4) & 7
for _i in range(8):
    for _j in range(8):
        CANON[_i][_j] = 0
    for _j in range(3):
        CANON[_i][NB[_i][_j]] = 1


def run_rounds(double r, double x,
               signed char[::1] cells, signed char[:, ::1] weights,
               unsigned char[::1] out_mask, double[::1] out_x,
               bint validate=False):
    """Same contract as _purepy.run_rounds."""
    cdef Py_ssize_t n = out_mask.shape[0]
    cdef Py_ssize_t k, i, j, m
    cdef int s[8]
    cdef int new[8]
    cdef int e[8]
    cdef int t, a, mask
    cdef signed char wv
    cdef double x_min = 1.0
    cdef double x_max = 0.0
    cdef int s_min = 3
    cdef int s_max = 1
    for i in range(8):
        s[i] = cells[i]
    for k in range(n):
        # Synchronous cell update: every weighted sum uses the old cells.
        for i in range(8):
            t = (weights[i, NB[i][0]] * s[NB[i][0]]
                 + weights[i, NB[i][1]] * s[NB[i][1]]
                 + weights[i, NB[i][2]] * s[NB[i][2]])
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
        for i in range(8):
            s[i] = new[i]
        # Eight tent iterations; the 4th fractional binary digit of each
        # state becomes a +-1 control bit.
        for j in range(8):
            x = r * x if x <= 0.5 else r * (1.0 - x)
            if validate:
                if not 0.0 < x < 1.0:
                    raise StateInvariantError(f"round {k}: tent state {x!r} escaped (0, 1)")
                if x < x_min:
                    x_min = x
                if x > x_max:
                    x_max = x
            e[j] = 1 if (<long long> (x * 16.0)) & 1 else -1
        mask = 0
        for j in range(8):
            mask = (mask << 1) | (1 if s[j] > 0 else 0)
        # Sign flips where a cell disagrees with its control bit.  An edge
        # between two disagreeing cells is negated twice, i.e. unchanged.
        for i in range(8):
            if s[i] != e[i]:
                for m in range(3):
                    j = NB[i][m]
                    weights[i, j] = -weights[i, j]
                    weights[j, i] = -weights[j, i]
        if validate:
            for i in range(8):
                for j in range(8):
                    wv = weights[i, j]
                    if weights[j, i] != wv:
                        raise StateInvariantError(
                            f"round {k}: weight matrix asymmetric at ({i}, {j})"
                        )
                    if CANON[i][j]:
                        if wv != 1 and wv != -1:
                            raise StateInvariantError(
                                f"round {k}: weight ({i}, {j}) is {wv}, expected +-1"
                            )
                    elif wv != 0:
                        raise StateInvariantError(
                            f"round {k}: unexpected non-zero weight at ({i}, {j})"
                        )
        out_mask[k] = <unsigned char> mask
        out_x[k] = x
    for i in range(8):
        cells[i] = <signed char> s[i]
    if validate:
        return x, (x_min, x_max, s_min, s_max)
    return x, None
