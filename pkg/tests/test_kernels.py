import random

import pytest

from finmeasure import kernels
from finmeasure.kernels import FINITELY_ADDITIVE, MONOTONE, NULL_ADDITIVE, NULL_UNION, SUBADDITIVE

import oracles

KINDS = (MONOTONE, NULL_ADDITIVE, NULL_UNION, SUBADDITIVE, FINITELY_ADDITIVE)
compiled = pytest.mark.skipif("cython" not in kernels.backends(), reason="compiled kernels not built")


def table(rng, n, hi=4, zero_p=0.4):
    vals = [0] + [0 if rng.random() < zero_p else rng.randint(1, hi) for _ in range((1 << n) - 1)]
    if rng.random() < 0.3:  # make it monotone now and then
        for s in range(1 << n):
            for b in range(n):
                if s >> b & 1:
                    vals[s] = max(vals[s], vals[s ^ (1 << b)])
    return vals


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


@compiled
@pytest.mark.parametrize("n", range(0, 8))
def test_backends_agree(n):
    rng = random.Random(n)
    py, cy = kernels.backends()["python"], kernels.backends()["cython"]
    for _ in range(30):
        vals = table(rng, n)
        full = (1 << n) - 1
        emask = rng.randint(0, full)
        assert py.variation_table(vals, n, full) == cy.variation_table(vals, n, full)
        assert py.variation_table(vals, n, emask) == cy.variation_table(vals, n, emask)
        assert bytes(py.atom_flags(vals, n)) == bytes(cy.atom_flags(vals, n))
        for k in KINDS:
            assert py.first_violation(vals, n, k) == cy.first_violation(vals, n, k)


@pytest.mark.parametrize("name", sorted(kernels.backends()))
def test_variation_table_against_enumeration(name):
    impl = kernels.backends()[name]
    rng = random.Random(7)
    for n in range(1, 6):
        vals = table(rng, n)
        got = impl.variation_table(vals, n, (1 << n) - 1)
        assert got == [oracles.variation(vals, s) for s in range(1 << n)]


def test_restricted_table_only_covers_submasks():
    rng = random.Random(1)
    vals = table(rng, 5)
    emask = 0b10110
    got = kernels.variation_table(vals, 5, emask)
    for s in range(1 << 5):
        if s & ~emask == 0:
            assert got[s] == oracles.variation(vals, s)


def test_huge_values_fall_back_to_python_ints():
    vals = [0, 1 << 70, 1 << 70, 1]
    assert kernels._compiled(vals, 2) is None
    assert kernels.variation_table(vals, 2)[3] == 1 << 71
    assert kernels.first_violation(vals, 2, MONOTONE) == (1, 3)


def test_benchmark_script_runs(capsys):
    import runpy
    from pathlib import Path

    bench = runpy.run_path(str(Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"))
    bench["main"](["--sizes", "3", "4", "--repeat", "1"])
    assert "variation_table" in capsys.readouterr().out
