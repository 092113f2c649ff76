import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance test."""
    if "test_acceptance" not in str(report.nodeid):
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" and report.passed:
        print(f"\n[acceptance] {name}: PASS", flush=True)
    elif report.when in ("setup", "call") and report.skipped:
        print(f"\n[acceptance] {name}: SKIP", flush=True)
    elif report.when == "call" and report.failed:
        print(f"\n[acceptance] {name}: FAIL", flush=True)


OFFICERS_CSV = """node_id,name,countries,sourceID
1,"Pavel Ivanov",RUS,leak-a
2,"Dmitri Petrov",RUS;CYP,leak-a
3,"Nina Front",RUS,leak-a
4,"Chen Wei",CHN,leak-b
"""

ENTITIES_CSV = """node_id,name,countries,sourceID
11,"Alpha Holdings Ltd",VGB,leak-a
12,"Beta Trust",PAN,leak-a
13,"Gamma Services",VGB,leak-b
"""

INTERMEDIARIES_CSV = """node_id,name,countries,sourceID
21,"Quiet Counsel LLP",CYP,leak-a
22,"Harbour Fiduciary",GBR,leak-a
23,"Orient Management",HKG,leak-b
"""

ADDRESSES_CSV = """node_id,name,countries,sourceID
31,"PO Box 99, Road Town",VGB,leak-a
"""

# chain c1-e1-i1 and c2-e2-i2 plus c2-e1; officer 3 is a nominee only;
# officer 4 (CHN) owns e3 which i3 services
RELATIONSHIPS_CSV = """node_id_start,node_id_end,rel_type,link
1,11,officer_of,beneficiary of
2,12,officer_of,beneficiary of
2,11,officer_of,beneficiary of
3,11,officer_of,nominee director of
4,13,officer_of,shareholder of
21,11,intermediary_of,intermediary of
22,12,intermediary_of,intermediary of
23,13,intermediary_of,intermediary of
1,31,registered_address,registered address
"""


@pytest.fixture
def icij_dir(tmp_path):
    """Small hand-written corpus in the ICIJ file layout."""
    files = {
        "nodes-officers.csv": OFFICERS_CSV,
        "nodes-entities.csv": ENTITIES_CSV,
        "nodes-intermediaries.csv": INTERMEDIARIES_CSV,
        "nodes-addresses.csv": ADDRESSES_CSV,
        "relationships.csv": RELATIONSHIPS_CSV,
    }
    for name, text in files.items():
        (tmp_path / name).write_text(text, encoding="utf-8")
    return tmp_path


@pytest.fixture
def corpus(icij_dir):
    from oligraph.ingest import load_corpus

    node_files = [
        icij_dir / "nodes-officers.csv",
        icij_dir / "nodes-entities.csv",
        icij_dir / "nodes-intermediaries.csv",
        icij_dir / "nodes-addresses.csv",
    ]
    return load_corpus(node_files, icij_dir / "relationships.csv")


@pytest.fixture
def fixture_bipartite():
    """The spec's little projection fixture: edges c1-i1, c2-i1, c2-i2."""
    from oligraph.graph import AnalysisGraph

    nodes = [(1, "client"), (2, "client"), (21, "intermediary"), (22, "intermediary")]
    edges = [(1, 21, 1), (2, 21, 1), (2, 22, 1)]
    return AnalysisGraph.build(nodes, edges, "bipartite")
