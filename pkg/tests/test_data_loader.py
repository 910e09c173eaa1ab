import json

import numpy as np
import pandas as pd
import pytest

from omegalab import data_loader
from omegalab import julia_moments as moments
from omegalab import julia_sampler as sampler
from omegalab.errors import ArgumentError

# ---------------------------
# Loaders
# ---------------------------


def test_load_permutation(json_file):
    assert data_loader.load_permutation(json_file({"image": [2, 0, 1]})) == [2, 0, 1]


def test_load_finite_system_defaults_potential(json_file):
    image, c = data_loader.load_finite_system(json_file({"map": [0, 2, 0, 2]}))
    assert image == [0, 2, 0, 2]
    assert c == [0.0] * 4


def test_load_finite_system_with_potential(json_file):
    image, c = data_loader.load_finite_system(json_file({"map": [1, 0], "c": [0.5, -1]}))
    assert c == [0.5, -1.0]


@pytest.mark.parametrize(
    "payload",
    [
        {"map": []},
        {"map": [0, "x"]},
        {"map": [0, 1], "c": [1.0]},
        {"map": [0, 1], "c": ["a", 1.0]},
        {"image": [0]},
        [0, 1],
    ],
)
def test_load_finite_system_rejects_bad_payload(json_file, payload):
    with pytest.raises(ArgumentError):
        data_loader.load_finite_system(json_file(payload))


def test_load_permutation_missing_field(json_file):
    with pytest.raises(ArgumentError):
        data_loader.load_permutation(json_file({"map": [0]}))


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ArgumentError):
        data_loader.load_permutation(str(tmp_path / "absent.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ArgumentError):
        data_loader.load_permutation(str(broken))


# ---------------------------
# Writers
# ---------------------------


def test_render_csv_metadata_lines():
    frame = pd.DataFrame({"n": [0, 1], "x": [0.5, 0.25]})
    text = data_loader.render_csv(frame, {"tool": "omegalab", "seed": 3})
    lines = text.splitlines()
    assert lines[0] == '# tool: "omegalab"'
    assert lines[1] == "# seed: 3"
    assert lines[2] == "n,x"
    assert lines[3] == "0,0.5"


def test_render_csv_full_precision():
    text = data_loader.render_csv(pd.DataFrame({"x": [1 / 3]}))
    assert text.splitlines()[1] == "0.33333333333333331"


def test_write_csv_to_stdout(capsys):
    data_loader.write_csv(pd.DataFrame({"k": [1]}))
    assert capsys.readouterr().out == "k\n1\n"


def test_moment_table_export_round_trip(tmp_path):
    path = tmp_path / "moments.csv"
    data_loader.export_moment_table(moments.moment_table(3), str(path), metadata={"k_max": 3})
    assert path.read_text().startswith("# k_max: 3\n")
    frame = data_loader.read_csv(str(path))
    assert list(frame["k"]) == [0, 1, 2, 3]
    assert list(frame["lambda"]) == ["1", "1/2", "3/8", "5/16"]


def test_export_cloud(tmp_path):
    cloud = sampler.sample(1.5, 50, seed=2)
    csv_path, meta_path = tmp_path / "cloud.csv", tmp_path / "cloud.json"
    data_loader.export_cloud(cloud, str(csv_path), str(meta_path), {"tool": "omegalab"})

    frame = data_loader.read_csv(str(csv_path))
    assert list(frame.columns) == ["re", "im"]
    assert np.allclose(frame["re"] + 1j * frame["im"], cloud.points, rtol=1e-15, atol=1e-15)

    meta = json.loads(meta_path.read_text())
    assert meta["seed"] == 2
    assert meta["count"] == 50
    assert meta["burn_in"] == 100
    assert meta["tool"] == "omegalab"
