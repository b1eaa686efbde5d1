import os
from pathlib import Path

import pytest

import dyncomplab as dc

SOURCE = Path(os.environ.get("DYNCOMPLAB_SOURCE_DIR", Path(__file__).resolve().parents[2]))


def test_catalog_lists_programs():
    names = dc.catalog()
    assert "parity" in names
    assert "parity_exists_deg_prop_3" in names


def test_parity_run_matches_oracle():
    script = (SOURCE / "fixtures" / "parity.chg").read_text()
    rows = dc.run("parity", script, oracle="parity")
    assert rows and all(r["match"] for r in rows)
    assert rows[0]["answer"] == "true"


def test_fig4_colourings():
    for variant, expected in [("colour-134", True), ("colour-123", False)]:
        g = dc.materialize(dc.fixture_script("fig4", variant))
        assert dc.eval_query("parity-exists-deg", g, k=3) is expected


def test_fig4_edges():
    edges = dc.lower_bound_edges(4, 2, "1,3,4;2,3,4")
    assert len(edges) == 16
    assert dc.verify_lower_bound(4, 2, "1,3,4;2,3,4")


def test_engine_on_fixture():
    rows = dc.run_engine("fo-degk", k=4, script=dc.fixture_script("fig2", "uncolour-v7"))
    assert all(r["match"] for r in rows)


def test_fuzz_is_clean():
    s = dc.fuzz("size_k", k=2, seeds=5, length=50, audit_runs=2)
    assert s["failures"] == []
    assert s["runs"] == 5


def test_sym_state():
    circuit = (SOURCE / "fixtures" / "two_gates.sym").read_text()
    st = dc.SymState(circuit, [False, False, False])
    st.flip(1)
    st.flip(0)
    assert st.activated() == 1
    assert st.output()


def test_errors_are_mapped():
    with pytest.raises(dc.Error):
        dc.run("no_such_program", "domain 2\n")
