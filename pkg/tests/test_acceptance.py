"""End-to-end gate over the full check registry.

Runs the suite once per pytest session and groups its checks by the
guarantee they witness, so `pytest -v` prints one pass/fail line per
guarantee and a failure names the check ids and measured values rather
than a line deep inside a runner.  A catch-all test keeps the grouping
exhaustive: a new check added to the suite must be slotted into a group
here before the gate goes green again.
"""

import pytest

from fracsob.scenarios import load_config, run_suite

# Each entry: (label, check ids that must all pass).  Labels become the
# pytest -v line for the group.
GROUPS = [
    (
        "spectral-round-trips",
        (
            "spectral/laplacian-roundtrip",
            "spectral/riesz-squared",
            "spectral/newtonian-div-grad",
            "spectral/round-trip-time",
        ),
    ),
    (
        "mollification-rate-ladder",
        (
            "corpus/rate-cusp-k0",
            "corpus/rate-cusp-k1",
            "corpus/rate-cusp-k2",
            "corpus/rate-cone-grad-1-k0",
            "corpus/rate-cone-grad-1-k1",
            "corpus/rate-cone-grad-1-k2",
            "corpus/rate-cone-grad-2-k0",
            "corpus/rate-cone-grad-2-k1",
            "corpus/rate-cone-grad-2-k2",
            "corpus/rate-time",
        ),
    ),
    (
        "commutator-rate-gain",
        (
            "corpus/commutator-cusp-cusp-k0",
            "corpus/commutator-cusp-cusp-k1",
            "corpus/commutator-cone-grad-1-cone-grad-2-k0",
            "corpus/commutator-cone-grad-1-cone-grad-2-k1",
        ),
    ),
    (
        "mollified-metric-convergence",
        (
            "cylinder/metric-c0-final",
            "cylinder/metric-l32-slope",
            "cone/metric-c0-final",
            "cone/metric-l32-slope",
        ),
    ),
    (
        "christoffel-and-shape-rates",
        (
            "cone/christoffel-slope",
            "cone/ii-slope",
        ),
    ),
    (
        "codazzi-residuals",
        (
            "plane/codazzi-corrected",
            "cylinder/codazzi-corrected",
            "codazzi/graph-corrected",
            "codazzi/graph-raw-nonvacuous",
            "cone/codazzi-raw-decreasing",
            "cone/codazzi-raw-final",
        ),
    ),
    (
        "jacobian-scaling",
        (
            "rank1-map/jacobian-delta-0.1",
            "rank1-map/jacobian-delta-0.01",
        ),
    ),
    (
        "winding-degree",
        (
            "perturbed-identity/degree-residual",
            "perturbed-identity/degree-positivity",
        ),
    ),
    (
        "cone-jacobian-atom",
        (
            "cone/atom-relative-error",
            "cone/atom-time",
        ),
    ),
    (
        "factorization-identities",
        (
            "rank1-map/const-lambda-identity",
            "rank1-map/constructed-triple",
            "cylinder/coherence-final-m1",
            "cylinder/coherence-final-m2",
        ),
    ),
    (
        "hodge-decomposition",
        (
            "hodge/reconstruction",
            "hodge/difference-drop-a",
            "hodge/difference-drop-beta",
        ),
    ),
    (
        "determinant-estimate",
        ("det-estimate/frozen-constant",),
    ),
    (
        "developability-classification",
        (
            "plane/all-flat",
            "cylinder/ruled-fraction",
            "cylinder/axis-angle",
            "cylinder/constancy-agreement",
            "cone/singular-cluster",
            "cone/radial-ruling-angle",
            "ruled/ruled-fraction",
            "ruled/ruling-angle",
        ),
    ),
    (
        "covered-area-scaling",
        (
            "rank1-map/covered-area",
            "rank1-map/identity-area-control",
        ),
    ),
    (
        "curve-moduli-and-content",
        (
            "hilbert/cusp-modulus-decreasing",
            "hilbert/cusp-modulus-embedded",
            "hilbert/content-floor",
            "hilbert/smooth-content-decreasing",
        ),
    ),
    (
        "suite-wall-time",
        ("suite/wall-time",),
    ),
    (
        "immersion-construction",
        (
            "plane/isometry-residual",
            "cylinder/isometry-residual",
            "cone/isometry-residual",
            "ruled/isometry-residual",
            "cylinder/normal-unit",
            "cylinder/det-ii",
        ),
    ),
]


@pytest.fixture(scope="session")
def suite(request):
    if request.config.getoption("--skip-suite"):
        pytest.skip("--skip-suite given")
    return run_suite(load_config())


@pytest.fixture(scope="session")
def by_id(suite):
    table = {c["id"]: c for c in suite["checks"]}
    table.update({c["id"]: c for c in suite["timing"]["checks"]})
    return table


@pytest.mark.parametrize(("label", "ids"), GROUPS, ids=[g[0] for g in GROUPS])
def test_guarantee(by_id, label, ids):
    missing = [cid for cid in ids if cid not in by_id]
    assert not missing, f"suite emitted no check named {missing}"
    failed = [by_id[cid] for cid in ids if not by_id[cid]["passed"]]
    detail = "; ".join(
        f"{c['id']}: value {c['value']} (require {c['require']})" for c in failed
    )
    assert not failed, detail


def test_groups_cover_registry(by_id):
    grouped = {cid for _, ids in GROUPS for cid in ids}
    assert grouped == set(by_id), (
        f"ungrouped checks: {sorted(set(by_id) - grouped)}; "
        f"stale ids: {sorted(grouped - set(by_id))}"
    )


def test_suite_verdict(suite):
    assert suite["passed"]
