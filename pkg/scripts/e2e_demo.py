"""Deploy a base ontology project to an in-process stub repository, then
build a dependent project from an empty local repository, and rerun the
build offline. Prints each goal's output and the stub's request count."""

import argparse
import os
import sys
import tempfile
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from projects import make_app, make_base  # noqa: E402
from ontomvn.cli import main as ontomvn  # noqa: E402
from ontomvn.stubserver import StubRepositoryServer  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--workdir", type=Path, help="keep the projects here instead of a temp dir")
    ap.add_argument("--phase", default="package")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        work = args.workdir or Path(tmp)
        work.mkdir(parents=True, exist_ok=True)
        with StubRepositoryServer() as stub:
            start = time.perf_counter()
            os.environ["ONTOMVN_HOME"] = str(work / "publisher-home")
            code = ontomvn(["deploy", "--project-dir", str(make_base(work, stub.url))])
            print(f"deploy base: exit {code}")
            if code:
                return code

            os.environ["ONTOMVN_HOME"] = str(work / "consumer-home")
            app = make_app(work, stub.url)
            stub.reset_hits()
            code = ontomvn([args.phase, "--project-dir", str(app)])
            print(f"{args.phase} app: exit {code}, {stub.hit_count} remote requests")
            if code:
                return code

            stub.reset_hits()
            code = ontomvn([args.phase, "-o", "--project-dir", str(app)])
            print(f"{args.phase} app offline: exit {code}, {stub.hit_count} remote requests")
            print(f"total {time.perf_counter() - start:.2f}s")

        for name in sorted(p.name for p in (app / "target").iterdir() if p.is_file()):
            print(f"target/{name}")
    return code


if __name__ == "__main__":
    sys.exit(main())
