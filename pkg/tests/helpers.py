"""Shared comparison helpers for the test suite."""

import numpy as np


def branch_dist(a, b):
    """Distance between quasi-energies with the real part compared mod 2 pi."""
    a, b = complex(a), complex(b)
    dr = (a.real - b.real + np.pi) % (2.0 * np.pi) - np.pi
    return abs(dr + 1j * (a.imag - b.imag))


def assert_multiset_close(got, want, tol):
    """Greedy nearest matching of two complex multisets."""
    got = list(np.asarray(got, dtype=complex))
    want = list(np.asarray(want, dtype=complex))
    assert len(got) == len(want)
    for g in got:
        dists = [abs(g - w) for w in want]
        j = int(np.argmin(dists))
        assert dists[j] < tol, f"no partner for {g}; best {dists[j]:.2e}"
        want.pop(j)
