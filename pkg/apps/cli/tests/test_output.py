from pathlib import Path

import orjson
from sfqsim.cli.commands import SWEEP_FIELDS
from sfqsim.cli.output import dump_json, render_csv, write_csv
from sfqsim.shared.results import SweepRow


def _rows() -> list[SweepRow]:
    return [
        SweepRow(hold_ns=5.0, duration_ns=11.4, infidelity=0.25, theta=0.5, phi=0.1),
        SweepRow(
            hold_ns=5.25,
            duration_ns=11.65,
            infidelity=float("nan"),
            theta=float("nan"),
            phi=float("nan"),
            status="failed",
        ),
    ]


def test_csv_follows_requested_column_order() -> None:
    text = render_csv(_rows(), SWEEP_FIELDS)

    lines = text.split("\n")
    assert lines[0] == ",".join(SWEEP_FIELDS)
    assert lines[1] == "5.0,0.25,0.5,0.1,11.4,0.0,completed"
    assert lines[2].startswith("5.25,nan,")
    assert lines[2].endswith(",failed")
    assert text.endswith("\n")
    assert "\r" not in text


def test_dict_payloads_dump_nested_models() -> None:
    payload = orjson.loads(dump_json({"row": _rows()[0], "count": 2}))

    assert payload["count"] == 2
    assert payload["row"]["hold_ns"] == 5.0
    assert payload["row"]["status"] == "completed"


def test_write_csv_creates_parent_directories(tmp_path: Path) -> None:
    path = write_csv(tmp_path / "nested" / "sweep.csv", _rows()[:1], SWEEP_FIELDS)

    assert path.read_text(encoding="utf-8").count("\n") == 2
