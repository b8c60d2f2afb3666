"""Write the three figure CSVs (and PNGs) into one directory.

    python scripts/reproduce_figures.py [outdir]
"""

import sys
from pathlib import Path

from bkraus import cli


def main(outdir: str = "figures") -> int:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name in ("fig1", "fig2", "fig3"):
        code = cli.main([name, "--out", str(out / f"{name}.csv"), "--plot"])
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:2]))
