"""Regenerate the alist files shipped under codes/.

Two codes are built deterministically:

- hamming_7_4.alist: the [7,4] Hamming code with parity-check rows
  1110100 / 0111010 / 1101001 (columns are the seven nonzero binary
  triples, so minimum distance 3).

- tanner_155_64.alist: the (3,5)-regular quasi-cyclic [155,64] code on
  31-element circulants.  The 3x5 block of cyclic-shift exponents is
  s[j][l] = 5^j * 2^l mod 31 (2 has order 5 and 5 has order 3 in the
  multiplicative group mod 31).  Its parity-check matrix is 93 x 155
  with GF(2) rank 91, giving dimension 64.
"""

import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from admmdec.code_graph import TannerGraph, gf2_rank, serialize_alist

HERE = pathlib.Path(__file__).resolve().parents[1] / "codes"

HAMMING_H = np.array(
    [
        [1, 1, 1, 0, 1, 0, 0],
        [0, 1, 1, 1, 0, 1, 0],
        [1, 1, 0, 1, 0, 0, 1],
    ],
    dtype=np.uint8,
)


def circulant(shift, size=31):
    p = np.zeros((size, size), dtype=np.uint8)
    rows = np.arange(size)
    p[rows, (rows + shift) % size] = 1
    return p


def tanner_155_h():
    shifts = [[(pow(5, j, 31) * pow(2, l, 31)) % 31 for l in range(5)] for j in range(3)]
    return np.block([[circulant(s) for s in row] for row in shifts])


def main():
    HERE.mkdir(exist_ok=True)

    g = TannerGraph.from_parity_matrix(HAMMING_H)
    (HERE / "hamming_7_4.alist").write_text(serialize_alist(g))
    print(f"hamming_7_4: n={g.n} m={g.m} rank={gf2_rank(HAMMING_H)}")

    h = tanner_155_h()
    rank = gf2_rank(h)
    g = TannerGraph.from_parity_matrix(h)
    assert g.n == 155 and g.m == 93
    assert set(g.check_degrees.tolist()) == {5} and set(g.var_degrees.tolist()) == {3}
    assert rank == 91, f"expected rank 91, got {rank}"
    (HERE / "tanner_155_64.alist").write_text(serialize_alist(g))
    print(f"tanner_155_64: n={g.n} m={g.m} rank={rank} dim={g.n - rank}")


if __name__ == "__main__":
    main()
