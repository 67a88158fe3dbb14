"""
Quick check of the bundled input documents
"""

import sys
from pathlib import Path

# Add the project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from qtembed.cli import run_faces, run_validate  # noqa: E402
from qtembed.document import load_document  # noqa: E402
from qtembed.errors import QtembedError  # noqa: E402


def main() -> int:
    data_dir = project_root / "data"
    failures = 0

    print("qtembed Document Check")
    print("=" * 50)

    for path in sorted(data_dir.glob("*.txt")):
        try:
            doc = load_document(path)
            bundle = run_validate(doc)
        except QtembedError as exc:
            print(f"  {path.name:15}: ERROR {exc}")
            failures += 1
            continue

        if not bundle.passed:
            print(f"  {path.name:15}: FAIL")
            failures += 1
            continue

        faces = run_faces(doc)
        print(
            f"  {path.name:15}: PASS  n={faces.n} m={faces.m} "
            f"f0={faces.f0} f1={faces.f1}"
        )

    print(f"\n{failures} document(s) failed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
