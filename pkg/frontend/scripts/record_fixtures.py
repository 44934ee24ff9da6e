"""Record real service sessions as replayable fixtures for the frontend tests.

Drives the experiment service in-process and captures every request/response
pair. Rerun after service changes:

    python3 frontend/scripts/record_fixtures.py
"""

import json
import time
from pathlib import Path

from fastapi.testclient import TestClient

from greenrunner.reasoning import FallbackClient
from greenrunner.service import ExperimentService, create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

ROWS = [
    ("m0", 30.0, 500.0, 0.70, 0.55),
    ("m1", 60.0, 1500.0, 0.75, 0.40),
    ("m2", 120.0, 4000.0, 0.80, 0.65),
    ("m3", 240.0, 9000.0, 0.72, 0.35),
    ("m4", 480.0, 20000.0, 0.78, 0.50),
]

CREATE_BODY = {
    "repository": {
        "version": 1,
        "models": [
            {"id": r[0], "size_mb": r[1], "complexity_mmac": r[2], "benchmark_accuracy": r[3]}
            for r in ROWS
        ],
    },
    "manifest": {"version": 1, "name": "ui", "n_samples": 20, "seed": 2},
    "zoo": {
        "version": 1,
        "specs": [{"id": r[0], "true_target_accuracy": r[4]} for r in ROWS],
    },
    "use_case": "label photos from an embedded sensor",
    "strategy": "thompson",
    "budget": 40,
    "seed": 9,
}


def main(tmp_dir: str = "/tmp/greenrunner-ui-fixture") -> None:
    service = ExperimentService(tmp_dir, llm_client=FallbackClient())
    client = TestClient(create_app(service))
    steps = []

    def call(method, path, body=None):
        response = client.request(method, path, json=body)
        steps.append(
            {
                "method": method,
                "path": path,
                "request_body": body,
                "status": response.status_code,
                "response_body": response.json(),
            }
        )
        return response.json()

    record = call("POST", "/experiments", CREATE_BODY)
    rid = record["id"]
    call("POST", f"/experiments/{rid}/stage")
    call(
        "PATCH",
        f"/experiments/{rid}/weights",
        {"weight_acc": 0.9, "weight_size": 0.05, "weight_complexity": 0.05},
    )
    call("GET", f"/experiments/{rid}")
    # Unsaved edit flushed right before the run:
    call(
        "PATCH",
        f"/experiments/{rid}/weights",
        {"weight_acc": 0.8, "weight_size": 0.1, "weight_complexity": 0.1},
    )
    call("POST", f"/experiments/{rid}/run")
    service.wait(rid, timeout=30)
    time.sleep(0.05)
    call("GET", f"/experiments/{rid}")
    report = call("GET", f"/experiments/{rid}/report")

    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "staging_session.json").write_text(json.dumps(steps, indent=2) + "\n")
    (FIXTURES / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    print(f"recorded {len(steps)} steps; report with {len(report['ranking'])} arms")


if __name__ == "__main__":
    main()
