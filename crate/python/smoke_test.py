"""Smoke test for the hobopy extension module.

Build and install first, e.g.:

    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/hobopy-*.whl
    python python/smoke_test.py
"""

import itertools
import math

import hobopy

SMALL = """
-10 x0
+7 x1
+1 x0 x1
-4 x0 x2
+8 x1 x2
-1 x0 x1 x2
"""


def main():
    p = hobopy.Polynomial(SMALL)
    assert p.num_vars == 3 and p.degree == 3 and len(p) == 6, repr(p)
    assert p.evaluate([1, 0, 1]) == -14.0
    assert p.evaluate([1, 1, 1]) == 1.0
    assert p.delta_flip([1, 0, 1], 1) == 15.0

    t = hobopy.HoboTensor.build(p)
    assert t.order == 3 and t.n == 3
    assert t.get([0, 0, 0]) == -10.0 and t.get([1, 1, 2]) == 8.0
    assert t.contract([1, 0, 1]) == -14.0
    for bits in itertools.product([0, 1], repeat=3):
        x = list(bits)
        assert t.contract(x) == p.evaluate(x)
        assert abs(t.compressed_cost(x) - p.evaluate(x)) < 1e-8
    assert t.to_polynomial().terms() == p.terms()

    sigma = t.singular_values()
    assert abs(sigma[0] - math.sqrt((231 + math.sqrt(281)) / 2)) < 1e-10
    dense, factored, err, rel = t.compression_report(1)
    assert (dense, factored) == (27, 13)
    assert abs(err - sigma[1]) < 1e-8

    result = hobopy.anneal(p, sweeps=1000, restarts=8, seed=42)
    assert result.cost == -14.0 and result.assignment == [1, 0, 1], result
    assert hobopy.brute_force_min(p) == ([1, 0, 1], -14.0)

    q = hobopy.Polynomial("-10 x0\n7 x1\n1 x0 x1")
    assert hobopy.qubo_matrix(q) == [[-10.0, 1.0], [0.0, 7.0]]
    assert abs(hobopy.acceptance_probability(2.0, 2.0) - math.exp(-1)) < 1e-15

    try:
        hobopy.Polynomial("1 x-1")
    except ValueError as e:
        assert "line 1" in str(e)
    else:
        raise AssertionError("expected a parse error")

    r = hobopy.Polynomial.random(12, 4, 50, seed=1, integer=True)
    assert len(r) == 50 and r.degree <= 4
    print("hobopy smoke test passed")


if __name__ == "__main__":
    main()
