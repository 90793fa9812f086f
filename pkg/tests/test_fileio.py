import numpy as np
import pytest

import mixmle as mx
from mixmle.errors import InvalidInputError


class TestTopologyFiles:
    def test_roundtrip(self, tmp_path):
        g = mx.grid_topology(2, 3)
        path = tmp_path / "topo.txt"
        mx.save_topology(g, path)
        back = mx.load_topology(path)
        assert back == g

    def test_format(self, tmp_path):
        path = tmp_path / "topo.txt"
        mx.save_topology(mx.chain_topology(3), path)
        assert path.read_text() == "3 2\n0 1\n1 2\n"

    def test_edge_count_mismatch(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 2\n0 1\n")
        with pytest.raises(InvalidInputError):
            mx.load_topology(path)

    def test_invalid_edge_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 1\n2 1\n")
        with pytest.raises(InvalidInputError):
            mx.load_topology(path)


class TestDatasetFiles:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(0)
        data = mx.Dataset(rng.choice([-1, 1], size=(7, 4)))
        path = tmp_path / "data.txt"
        mx.save_dataset(data, path)
        back = mx.load_dataset(path, 4)
        assert np.array_equal(back.examples, data.examples)

    def test_accepts_bare_ones(self, tmp_path):
        path = tmp_path / "data.txt"
        path.write_text("1 -1 1\n-1 1 -1\n")
        back = mx.load_dataset(path, 3)
        assert back.examples.tolist() == [[1, -1, 1], [-1, 1, -1]]

    def test_line_length_checked(self, tmp_path):
        path = tmp_path / "data.txt"
        path.write_text("+1 -1 +1\n+1 -1\n")
        with pytest.raises(InvalidInputError) as err:
            mx.load_dataset(path, 3)
        assert ":2:" in str(err.value)

    def test_non_spin_entries_rejected(self, tmp_path):
        path = tmp_path / "data.txt"
        path.write_text("+1 0 -1\n")
        with pytest.raises(InvalidInputError):
            mx.load_dataset(path, 3)

    def test_empty_rejected(self, tmp_path):
        path = tmp_path / "data.txt"
        path.write_text("\n")
        with pytest.raises(InvalidInputError):
            mx.load_dataset(path, 3)

    def test_cli_dataset_file_source(self, tmp_path):
        rng = np.random.default_rng(1)
        data = mx.Dataset(rng.choice([-1, 1], size=(5, 4)))
        data_path = tmp_path / "train.txt"
        mx.save_dataset(data, data_path)
        cfg = tmp_path / "cfg.cfg"
        cfg.write_text(f"""
[model]
grid_rows = 2
grid_cols = 2

[data]
dataset_file = {data_path}

[constraint]
kind = box
beta = 0.2

[learner]
lambda = 1.0
""")
        from mixmle.cli import load_config
        parsed = load_config(str(cfg))
        assert np.array_equal(parsed.dataset.examples, data.examples)
