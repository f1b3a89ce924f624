"""Regenerate the committed golden outputs for the 30-package fixture from the
brute-force oracles. Run from the repository root: ``python tests/make_golden.py``."""

from pathlib import Path

import oracles

HERE = Path(__file__).parent
FIXTURE = HERE / "data" / "pypi30.snap"
GOLDEN = HERE / "golden"

# command line (after the subcommand) -> expected payload
CASES = {
    "graph-stats": ([], lambda: oracles.expected_graph_stats(FIXTURE)),
    "popularity": (["--top", "2"], lambda: oracles.expected_popularity(FIXTURE, k=2)),
    "abandonment": ([], lambda: oracles.expected_abandonment(FIXTURE)),
    "squat-scan": ([], lambda: oracles.expected_squat_scan(FIXTURE)),
    "squat-scan-d2": (["--max-distance", "2"], lambda: oracles.expected_squat_scan(FIXTURE, max_distance=2)),
    "import-squat-scan": ([], lambda: oracles.expected_import_squat(FIXTURE)),
}


def render(case):
    return oracles.dump(CASES[case][1]())


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for case in CASES:
        (GOLDEN / f"{case}.json").write_text(render(case), encoding="utf-8")
        print("wrote", case)
