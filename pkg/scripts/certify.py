"""Run the oracle certification sweep and print the report.

    python scripts/certify.py [--eta-error DELTA]
"""

import argparse
import sys

from bkraus.oracle import CertificationRequest, certify


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--eta-error", type=float, default=0.0, help="negative control: perturb eta")
    args = parser.parse_args()
    report = certify(CertificationRequest(eta_error=args.eta_error))
    sys.stdout.write(report.to_text())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
