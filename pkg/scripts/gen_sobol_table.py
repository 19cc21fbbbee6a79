#!/usr/bin/env python3
"""Regenerate the bundled Sobol' direction-number table.

Extracts the Joe--Kuo primitive polynomials and initial direction numbers
(the ``new-joe-kuo-6.21201`` data set, as redistributed inside SciPy) and
writes the first 1111 dimensions in the classic text layout::

    d  s  a  m_1 m_2 ... m_s

Dimension 1 is the plain van der Corput sequence and carries no table row.
Run from the repository root:

    python scripts/gen_sobol_table.py
"""

import os

import numpy as np
import scipy.stats

MAX_DIM = 1111
OUT = os.path.join(
    os.path.dirname(__file__), "..", "src", "certint", "data",
    "sobol_direction_numbers.txt",
)


def main() -> None:
    npz = os.path.join(
        os.path.dirname(scipy.stats.__file__), "_sobol_direction_numbers.npz"
    )
    data = np.load(npz)
    poly = data["poly"]
    vinit = data["vinit"]

    lines = [
        "# Sobol' direction numbers, Joe-Kuo new-joe-kuo-6 data set "
        "(first 1111 dimensions).",
        "# Columns: d s a m_i ; polynomial x^s + a_1 x^(s-1) + ... + 1 with "
        "a = (a_1...a_(s-1))_2.",
        "d       s       a       m_i",
    ]
    for d in range(2, MAX_DIM + 1):
        p = int(poly[d - 1])
        s = p.bit_length() - 1
        a = (p - (1 << s) - 1) >> 1
        ms = [int(v) for v in vinit[d - 1][:s]]
        assert all(m > 0 and m % 2 == 1 and m < (1 << (i + 1)) for i, m in enumerate(ms))
        lines.append(f"{d}\t{s}\t{a}\t{' '.join(str(m) for m in ms)}")
    with open(OUT, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {OUT} ({MAX_DIM - 1} rows)")


if __name__ == "__main__":
    main()
