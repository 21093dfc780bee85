from uuid import uuid1

import pandas as pd
import pytest

from hypercolor import serializer


class TestParquetSerializer:
    def test_init_compression_is_none(self):
        s = serializer.ParquetSerializer()
        assert s.compression == "snappy"

    def test_dump_load_results(self, tmp_path, results):
        s = serializer.ParquetSerializer()
        s.dump(results, tmp_path / "file.parquet")
        assert (tmp_path / "file.parquet").exists()
        assert results.equals(s.load(tmp_path / "file.parquet"))

    def test_missing_values_survive(self, tmp_path):
        s = serializer.ParquetSerializer()
        frame = pd.DataFrame([{"q_exact": None, "verdict_c1": "undecided"}])
        s.dump(frame, tmp_path / "file.parquet")
        loaded = s.load(tmp_path / "file.parquet")
        assert pd.isna(loaded.loc[0, "q_exact"])
        assert loaded.loc[0, "verdict_c1"] == "undecided"

    def test_invalid_arrow_type(self, tmp_path):
        s = serializer.ParquetSerializer()
        results = pd.Series([uuid1() for i in range(3)], name="uuid_col").to_frame()
        with pytest.raises(ValueError) as excinfo:
            s.dump(results, tmp_path / "file.parquet")
        assert "FileStore(cache_store='...', backend='joblib')" in str(excinfo.value)
        assert "Arrow cannot encode" in str(excinfo.value)


class TestJoblibSerializer:
    def test_init_compression_is_none(self):
        s = serializer.JoblibSerializer()
        assert s.compression == 0

    def test_dump_load_results(self, tmp_path, results):
        s = serializer.JoblibSerializer()
        s.dump(results, tmp_path / "file.joblib")
        assert (tmp_path / "file.joblib").exists()
        assert results.equals(s.load(tmp_path / "file.joblib"))

    def test_dump_load_objects(self, tmp_path):
        s = serializer.JoblibSerializer(compression=3)
        results = pd.Series([uuid1() for i in range(3)], name="uuid_col").to_frame()
        s.dump(results, tmp_path / "file.joblib")
        assert results.equals(s.load(tmp_path / "file.joblib"))


class TestCsvSerializer:
    def test_dump_load_results(self, tmp_path, results):
        s = serializer.CsvSerializer()
        s.dump(results, tmp_path / "file.csv")
        assert results.equals(s.load(tmp_path / "file.csv"))

    def test_empty_cells_are_missing(self, tmp_path):
        s = serializer.CsvSerializer()
        s.dump(pd.DataFrame([{"notes": "", "n": 7}]), tmp_path / "file.csv")
        loaded = s.load(tmp_path / "file.csv")
        assert pd.isna(loaded.loc[0, "notes"])
        assert loaded.loc[0, "n"] == 7


def test_serializers_by_format():
    assert set(serializer.SERIALIZERS) == {"parquet", "joblib", "csv"}
    assert serializer.SERIALIZERS["csv"] is serializer.CsvSerializer
