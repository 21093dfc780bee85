from pathlib import Path
from typing import Any, Union

import joblib
import pandas as pd
import pyarrow as pa

PathLike = Union[str, Path]


class BaseSerializer:
    """Reads and writes sweep frames in one on-disk format.

    Parameters
    ----------
    compression
        Format specific compression. ``None`` selects ``default_compression``.
    """

    fmt = ""
    extension = ""
    default_compression: Any = None

    def __init__(self, compression: Any = None) -> None:
        self.compression = compression if compression is not None else self.default_compression

    @classmethod
    def load(cls, filepath: PathLike) -> pd.DataFrame:
        raise NotImplementedError

    def dump(self, frame: pd.DataFrame, filepath: PathLike) -> None:
        raise NotImplementedError


class ParquetSerializer(BaseSerializer):
    """Columnar storage through pyarrow; compression is one of
    'snappy' (default), 'gzip', 'brotli'."""

    fmt = "parquet"
    extension = ".parquet"
    default_compression = "snappy"

    @classmethod
    def load(cls, filepath: PathLike) -> pd.DataFrame:
        return pd.read_parquet(filepath)

    def dump(self, frame: pd.DataFrame, filepath: PathLike) -> None:
        try:
            frame.to_parquet(filepath, compression=self.compression, index=False)
        except (pa.ArrowInvalid, pa.ArrowTypeError) as exc:
            raise ValueError(
                f"Arrow cannot encode a column of this frame ({exc}). "
                "Cache it with FileStore(cache_store='...', backend='joblib') instead"
            ) from exc


class JoblibSerializer(BaseSerializer):
    """Pickled frames; compression is the ``compress`` level of joblib.dump."""

    fmt = "joblib"
    extension = ".joblib"
    default_compression = 0

    @classmethod
    def load(cls, filepath: PathLike) -> pd.DataFrame:
        return joblib.load(filepath)

    def dump(self, frame: pd.DataFrame, filepath: PathLike) -> None:
        joblib.dump(frame, filepath, compress=self.compression, protocol=4)


class CsvSerializer(BaseSerializer):
    """Plain CSV reports. Empty cells read back as missing values."""

    fmt = "csv"
    extension = ".csv"

    @classmethod
    def load(cls, filepath: PathLike) -> pd.DataFrame:
        return pd.read_csv(filepath, keep_default_na=False, na_values=[""])

    def dump(self, frame: pd.DataFrame, filepath: PathLike) -> None:
        frame.to_csv(filepath, index=False, compression=self.compression)


SERIALIZERS = {cls.fmt: cls for cls in (ParquetSerializer, JoblibSerializer, CsvSerializer)}
