"""Run the conformance suite and write its JSON report.

Usage: python scripts/run_conformance.py [OUT_JSON] [--quick] [--ep]
"""
import sys

from swanson_csm.conformance import run_conformance
from swanson_csm.io import metadata, write_json
from swanson_csm.model import ModelParams


def main(argv) -> int:
    quick = "--quick" in argv
    params = ModelParams(1.0, -0.5, -0.5) if "--ep" in argv else ModelParams(1.0, -1.0, -0.5)
    paths = [a for a in argv if not a.startswith("--")]
    report = run_conformance(params, quick=quick)
    out = write_json(paths[0] if paths else "conformance.json",
                     metadata(params, quick=quick), report)
    for check in report["checks"]:
        print(f"{'PASS' if check['passed'] else 'FAIL'}  {check['name']}: {check['measured']:.2e}")
    print(out)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
