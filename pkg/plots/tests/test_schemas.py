import json

import numpy as np
import pytest

from heatplots.schemas import (
    SchemaError,
    load_certificate,
    load_ladder,
    read_convergence,
    read_scan,
    read_trajectory,
)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_missing_file_names_path(tmp_path):
    with pytest.raises(SchemaError, match="no such file"):
        read_trajectory(str(tmp_path / "absent.csv"))


def test_empty_csv_rejected(tmp_path):
    path = write(tmp_path, "empty.csv", "")
    with pytest.raises(SchemaError, match="empty file"):
        read_trajectory(path)


def test_missing_column_named(tmp_path):
    path = write(tmp_path, "bad.csv", "t,x\n0.0,0.0\n")
    with pytest.raises(SchemaError, match="'u'"):
        read_trajectory(path)
    conv = write(tmp_path, "conv.csv", "h,dt,order\n0.1,0.01,\n")
    with pytest.raises(SchemaError, match="'sup_error'"):
        read_convergence(conv)


def test_trajectory_requires_product_grid(tmp_path):
    path = write(tmp_path, "holes.csv", "t,x,u\n0.0,0.0,1.0\n0.0,1.0,2.0\n1.0,0.0,3.0\n")
    with pytest.raises(SchemaError, match="product grid"):
        read_trajectory(path)


def test_trajectory_reader_reshapes(tmp_path):
    path = write(
        tmp_path,
        "traj.csv",
        "t,x,u\n0.0,0.0,1.0\n0.0,0.5,2.0\n0.1,0.0,3.0\n0.1,0.5,4.0\n",
    )
    times, nodes, values = read_trajectory(path)
    assert np.array_equal(times, [0.0, 0.1])
    assert np.array_equal(nodes, [0.0, 0.5])
    assert np.array_equal(values, [[1.0, 2.0], [3.0, 4.0]])


def test_convergence_blank_order_is_none(tmp_path):
    path = write(
        tmp_path,
        "conv.csv",
        "h,dt,sup_error,order\n0.02,1e-05,0.001,\n0.01,1e-05,0.00025,2.0\n",
    )
    rows = read_convergence(path)
    assert rows[0]["order"] is None
    assert rows[1]["order"] == 2.0


def test_scan_parses_booleans(tmp_path):
    path = write(
        tmp_path,
        "scan.csv",
        "ratio,verdict,ladder_floor,barrier_ok\n0.1,trivial,1e-06,true\n10.0,nontrivial,0.2,false\n",
    )
    rows = read_scan(path)
    assert rows[0]["barrier_ok"] is True
    assert rows[1]["barrier_ok"] is False
    assert rows[1]["verdict"] == "nontrivial"


def test_ladder_json_missing_key_named(tmp_path):
    path = write(tmp_path, "ladder.json", json.dumps({"eps_sequence": [0.1]}))
    with pytest.raises(SchemaError, match="'final_sup_norms'"):
        load_ladder(path)


def test_certificate_json_rejects_non_object(tmp_path):
    path = write(tmp_path, "cert.json", "[1, 2]")
    with pytest.raises(SchemaError, match="JSON object"):
        load_certificate(path)
    junk = write(tmp_path, "junk.json", "{not json")
    with pytest.raises(SchemaError, match="not valid JSON"):
        load_certificate(junk)


def test_real_artifacts_parse(artifacts):
    times, nodes, values = read_trajectory(artifacts["trajectory"])
    assert values.shape == (times.size, nodes.size)
    assert times[0] == 0.0
    payload = load_ladder(artifacts["ladder"])
    assert len(payload["eps_sequence"]) == 3
    rows = read_scan(artifacts["scan"])
    assert [r["ratio"] for r in rows] == [0.1, 1.0, 10.0]
    conv = read_convergence(artifacts["conv_spatial"])
    assert len(conv) >= 3
