#!/usr/bin/env python3
"""Record PipelineResponse fixtures for the web console's contract tests.

Runs the real engine against a scratch home and writes one JSON document
per scenario into frontend/tests/fixtures/.
"""

import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from isoas.engine import Engine  # noqa: E402
from isoas.repository import SavedQuery  # noqa: E402

FIXTURE_CSV = (
    "id,name,kind,description,value\n"
    "1,spec,document,master spec,3\n"
    "2,drawing,cad,axle drawing,7\n"
    "3,manual,document,user manual,9\n"
)

OUT_DIR = Path(__file__).resolve().parents[1] / "frontend" / "tests" / "fixtures"


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        eng = Engine(Path(tmp) / "home")
        eng.repo.ingest("main", FIXTURE_CSV)

        hole_ir = json.dumps(
            {
                "store": "main",
                "concepts": ["document"],
                "attribute": "value",
                "filter": {"type": "hole", "op": ">"},
                "notes": [],
            }
        )
        eng.repo.save_query(SavedQuery(name="docs-gt", body=hole_ir, kind="ir"))

        scenarios = {
            "success_direct": lambda: eng.process("I am looking for document"),
            "success_between": lambda: eng.process("I need document where between 1 and 5"),
            "success_condeqbt": lambda: eng.process(
                "I need document where equal to between 1 and 5"
            ),
            "success_integrated": lambda: eng.process("I need document I want CAD"),
            "success_fallback": lambda: eng.process("We need axle"),
            "error_empty": lambda: eng.process(""),
            "error_parse": lambda: eng.process("where is the document"),
            "error_agreement": lambda: eng.process("They is searching music"),
            "error_unresolvable": lambda: eng.process("I"),
            "error_hole": lambda: eng.process("I need document where greater than"),
            "error_detached": None,  # handled below
            "saved_run_bound": lambda: eng.run_saved("docs-gt", [5]),
        }

        for name, run in scenarios.items():
            if name == "error_detached":
                eng.repo.detach_store("main")
                resp = eng.process("I need cad")
                eng.repo.attach_store("main")
            else:
                resp = run()
            path = OUT_DIR / f"{name}.json"
            path.write_text(
                json.dumps(resp.to_json(), indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
            print(f"wrote {path.relative_to(Path.cwd())}")


if __name__ == "__main__":
    main()
