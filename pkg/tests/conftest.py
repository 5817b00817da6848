import numpy as np
import pytest

from dualelast.basestate import BaseState, DynamicBaseState

_RESULTS_KEY = "acceptance_results"


def random_static_base(rng, e_lo=-0.2, e_hi=2.2):
    """Smooth random base state ``u_bar = s x + sum a_k sin(k pi x) / (k pi)``.

    The strain is kept inside ``[e_lo, e_hi]`` by rescaling the oscillation.
    """
    k = np.arange(1, 5)
    amp = rng.normal(size=4) / k
    slope = rng.uniform(e_lo + 0.3, e_hi - 0.3)
    osc = lambda x: np.cos(np.pi * np.multiply.outer(np.asarray(x, dtype=float), k)) @ amp
    scale = 0.25 / max(np.abs(amp).sum(), 1e-12)

    def u_bar(x):
        x = np.asarray(x, dtype=float)
        return slope * x + scale * (np.sin(np.pi * np.multiply.outer(x, k)) @ (amp / (np.pi * k)))

    def e_bar(x):
        return slope + scale * osc(x)

    return BaseState(u_bar=u_bar, e_bar=e_bar, label="random")


def random_dynamic_base(rng):
    a, b, c, d = rng.normal(size=4)
    e0 = rng.uniform(0.0, 2.0)
    return DynamicBaseState(
        v_bar=lambda x, t: 0.1 * a * np.sin(np.pi * x) * np.cos(t) + 0.05 * b,
        e_bar=lambda x, t: e0 + 0.1 * c * np.cos(2 * np.pi * x) + 0.05 * d * t,
        label="random",
    )


def pytest_configure(config):
    setattr(config, _RESULTS_KEY, [])


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion; printed in the terminal summary."""
    results = getattr(request.config, _RESULTS_KEY)

    def record(number, title, passed, detail):
        line = f"criterion {number:>2} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
        results.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, _RESULTS_KEY, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(results):
        terminalreporter.write_line(line)
