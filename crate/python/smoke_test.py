"""Smoke test for the ghcs_py extension.

Uses an installed ``ghcs_py`` when available, otherwise the library built by
``cargo build -p ghcs-py --features extension-module [--release]``.
"""

import cmath
import importlib.util
import math
import pathlib
import sys


def load():
    try:
        import ghcs_py

        return ghcs_py
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        lib = root / "target" / profile / "libghcs_py.so"
        if lib.exists():
            spec = importlib.util.spec_from_file_location("ghcs_py", lib)
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("ghcs_py not found: build it with cargo build -p ghcs-py --features extension-module")


def close(u, v, tol):
    return abs(u - v) <= tol * max(1.0, abs(v))


def main():
    g = load()

    cs = g.ParameterSet()
    assert cs.domain() == "plane"
    pair = g.ParameterSet([1 + 2j, 1 - 2j], [0.5])
    assert pair.domain() == "unit-disk" and close(pair.eta, 1.5, 1e-15)
    try:
        g.ParameterSet([-2.0])
        raise AssertionError("a = -2 must be rejected")
    except ValueError:
        pass

    alpha = 1.2 - 0.5j
    x = abs(alpha) ** 2
    pn = g.pn_distribution(cs, alpha)
    for n in range(10):
        assert close(pn[n], math.exp(-x) * x**n / math.factorial(n), 1e-13)
    mean, q = g.mean_and_mandel(cs, x)
    assert close(mean, x, 1e-12) and abs(q) < 1e-10

    f10 = g.ParameterSet([3.0], [])
    mean, q = g.mean_and_mandel(f10, 0.36)
    assert close(q, 0.36 / 0.64, 1e-12) and close(mean, 3 * 0.36 / 0.64, 1e-12)

    v = g.fock_vector(g.ParameterSet([], [0.5]), 0.8 + 0.3j, 1e-14)
    assert abs(v.norm_sqr() - 1.0) < 1e-12
    assert g.eigenvalue_residual(g.ParameterSet([2.0], [4.0]), 1.5 + 1j) < 1e-6

    assert g.moment_check("f11", g.ParameterSet([2.0], [4.0]), 20) < 1e-6
    assert close(g.weight_tilde("cs", cs, 2.0), math.exp(-2.0), 1e-14)
    assert close(g.circle_weight_attempt(g.ParameterSet([1.0], [])), 1 / (2 * math.pi), 1e-15)
    try:
        g.circle_weight_attempt(g.ParameterSet([2.0, 1.0], [4.0]))
        raise AssertionError("circle family must be refused")
    except ValueError:
        pass

    fock = g.FockVector([0, 0, 0, 1])
    theta, values, residual = g.phase_distribution(fock, "q")
    assert len(theta) == 721 and abs(residual) < 1e-8
    assert max(abs(p - 1 / (2 * math.pi)) for p in values) < 1e-12
    sig = g.fock_vector(cs, cmath.rect(0.75, 0.3), 1e-14)
    _, pq, _ = g.phase_distribution(sig, "q")
    _, ppb, _ = g.phase_distribution(sig, "pb")
    assert max(ppb) >= max(pq)

    z, zt = 0.4 + 0.2j, -0.3 + 0.6j
    psi = g.fock_vector(f10, zt, 1e-30)
    assert close(g.gh_husimi(psi, "f10", f10, z), g.self_dual_husimi("f10", f10, z, zt), 1e-10)

    phi = g.FockVector([1, 0.5j, -0.25])
    chi = g.FockVector([0.3, 1, 0.2 + 0.1j])
    got = g.inner_product_via_measure("f10", f10, phi, chi)
    assert abs(got - phi.inner(chi)) < 1e-5

    print("ghcs_py smoke test ok")


if __name__ == "__main__":
    main()
