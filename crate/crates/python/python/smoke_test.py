"""Smoke test for the lagmult_py extension module.

Run after `maturin develop`, or with the built shared library on PYTHONPATH
renamed to `lagmult_py.so`.
"""

import json
import math

import lagmult_py as lm


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    # L_2^a(x) = ((a+1)(a+2) - 2(a+2)x + x^2) / 2
    a, x = 0.5, 1.3
    expected = ((a + 1) * (a + 2) - 2 * (a + 2) * x + x * x) / 2
    assert close(lm.laguerre(2, a, x), expected, 1e-13)

    nodes, weights = lm.gauss_laguerre(1.0, 32)
    assert len(nodes) == 32 and close(sum(weights), 1.0, 1e-13)

    m = lm.MultiplierSeq("abel:0.9")
    assert close(m.value(3), 0.9**3, 1e-15)
    assert close(m.sup_abs(), 1.0, 1e-15)
    assert m.wbv_norm(2.0, 1.0) > 0
    # the identity at p = 1 has norm 2^(a+1) under this weight
    assert close(lm.MultiplierSeq("constant:1").mpinfty_norm(1.0, 2.0), 8.0, 1e-6)

    f = lm.LaguerreExpansion(1.0, [1.0, 0.5, 0.25])
    g = f.apply(m)
    assert close(g.coeffs[2], 0.25 * 0.81, 1e-15)
    assert g.parseval_sum() < f.parseval_sum()
    assert math.isfinite(f(2.0))

    h = lm.hardy([1.0, 2.0, 3.0], [1.0, 1.0, 1.0], [0.3, 0.2, 0.1])
    for lhs, b, rhs in h.values():
        assert lhs <= 4 * b * rhs

    try:
        lm.MultiplierSeq("bogus:1")
    except ValueError:
        pass
    else:
        raise AssertionError("bad spec accepted")

    csv, summary, passed = lm.run_experiment("hardy", "instances = 5\nhardy_len = 16\n")
    assert passed and csv.startswith("# schema: " + lm.SCHEMA_VERSION)
    assert json.loads(summary)["passed"] is True
    print("smoke test passed")


if __name__ == "__main__":
    main()
