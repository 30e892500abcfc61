import pytest

from masscodec.bhcode import build_bh_codebook, bundled_spec
from masscodec.codec import encode_codebook

CRITERION_TITLES = {
    "1": "worked-example fidelity",
    "2": "mixture round-trip at desk scale",
    "3": "balancing invariants",
    "4": "rate-bound table",
    "5": "erasure model",
    "6": "correction schemes",
    "7": "oracle equivalence",
    "8": "substitution detection",
}


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, printed on every run."""
    buckets: dict[str, list] = {}
    for outcome in ("passed", "failed", "error", "xfailed", "xpassed"):
        for report in terminalreporter.stats.get(outcome, []):
            name = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in name:
                continue
            key = name.split("test_criterion_", 1)[1].split("_", 1)[0]
            buckets.setdefault(key, []).append((name, outcome))
    if not buckets:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(buckets, key=lambda k: (len(k), k)):
        results = buckets[key]
        outcomes = {o for _, o in results}
        if outcomes <= {"passed"}:
            verdict = "PASS"
        elif outcomes <= {"passed", "xfailed"}:
            verdict = "PASS (with a documented expected failure)"
        else:
            verdict = "FAIL"
        title = CRITERION_TITLES.get(key, "")
        terminalreporter.write_line(
            f"ACCEPTANCE {key} ({title}): {verdict}"
            + "".join(
                f"\n    - {n.split('::')[-1]}: {o}" for n, o in sorted(results)
            )
        )


@pytest.fixture(scope="session")
def b2_codebook():
    """15 strings of length 8, order-2 distinct sums (distance-5 source)."""
    return build_bh_codebook(2, bundled_spec("bch_15_7"))


@pytest.fixture(scope="session")
def b3_codebook():
    """15 strings of length 10, order-3 distinct sums (distance-7 source)."""
    return build_bh_codebook(3, bundled_spec("bch_15_5"))


@pytest.fixture(scope="session")
def b2_n16_codebook():
    """20 strings of length 16 for the correction-scheme sweeps."""
    return build_bh_codebook(2, bundled_spec("bch_255_cols20"))


@pytest.fixture(scope="session")
def mc_codebook(b2_codebook):
    return encode_codebook(b2_codebook)


@pytest.fixture(scope="session")
def mc3_codebook(b3_codebook):
    return encode_codebook(b3_codebook)
