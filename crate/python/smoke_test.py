"""Smoke test for the smallball extension module (run python/build.sh first)."""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import smallball as sb


def close(a, b, tol):
    return abs(a / b - 1.0) <= tol


def main():
    assert "slepian" in sb.families() and len(sb.families()) == 6

    half = sb.Process("slepian", c=0.5)
    law = half.closed_law()
    assert close(law.K, 4 / math.sqrt(math.pi), 1e-14) and law.a == 1.0 and law.E == 0.25
    assert close(half.distortion_closed_form(), math.sqrt(2), 1e-14)
    roots = half.roots(4)
    assert all(close(r, w, 1e-10) for r, w in zip(roots, [math.pi, math.pi, 3 * math.pi, 3 * math.pi]))

    # combining two halved Wiener laws gives the c = 1/2 law back
    v = sb.Law(4 / math.sqrt(math.pi), 1.0, 2.0, 0.125).to_squared().scale(0.5)
    assert v.combine(v).to_norm().rel_diff(law) < 1e-12

    bridge = sb.Process("bridge-c-int", l=0)
    lam = bridge.eigenvalues(3)
    assert close(lam[0], 1 / math.pi**2, 1e-10)
    ny = bridge.nystrom(3, grid=400)
    assert close(ny[0], lam[0], 1e-3)

    oracle = bridge.oracle()
    p = oracle.saddlepoint(0.3)
    assert close(p, 0.363856, 1e-5)
    assert close(oracle.imhof(0.3), p, 1e-8)
    assert close(sb.asymptotic_eval(bridge.closed_law(), 0.05) / oracle.saddlepoint(0.05), 1.0, 0.01)

    chi2 = sb.finite_oracle([1.0])
    assert abs(chi2.imhof(1.0) - math.erf(1 / math.sqrt(2))) < 1e-6

    groups = sb.rank_beta_patterns("slepian-int", 2, c=1.0)
    assert groups[0][1] == ["00", "11"] and groups[1][1] == ["01", "10"]

    w = sb.Process("wiener-c-int", l=2, m=1, beta="1")
    assert w.assembled_law(400).rel_diff(w.closed_law()) < 1e-9

    assert abs(sb.vandermonde([1, -1]) - 2.0) < 1e-15
    assert abs(sb.psi_delta(-0.5, complex(math.pi / 3, 0)) - 0.5) < 1e-12

    rows = sb.run_verify("rank")
    assert rows and all(r["pass"] for r in rows)

    try:
        sb.Process("slepian", l=1)
    except ValueError:
        pass
    else:
        raise AssertionError("l accepted for slepian")
    try:
        bridge.oracle().saddlepoint(0.001)
    except sb.NumericalError:
        pass
    else:
        raise AssertionError("underflow not reported")

    print("smoke test passed")


if __name__ == "__main__":
    main()
