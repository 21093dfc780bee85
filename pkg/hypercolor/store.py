import hashlib
import json
from pathlib import Path
from typing import Any, Iterable, Optional, Tuple, Union
from zipfile import ZipFile

import pandas as pd

from . import serializer
from .utils import normalize_instance

Key = Tuple[str, str]


def hash_instance(instance: str, normalize: bool = False, extra: str = "") -> str:
    """Return the hash of an instance document plus run parameters. Normalized or not."""
    if normalize:
        instance = normalize_instance(instance)

    return hashlib.sha1(f"{instance}\n{extra}".encode()).hexdigest()


class BaseStore:
    pass


class FileStore(BaseStore):
    """Flat file store of sweep rows.

    Every entry is keyed by an instance document and a parameter string (the
    conjectures checked and the search budget), and made of a frame file plus a
    JSON metadata side file.

    Parameters
    ----------
    cache_store
        Root path where the cached files are stored.
    backend : {'parquet', 'joblib'}
        Serializer of the cached frames.
    normalize
        If True, normalize instance documents (edge order, whitespace, ``meta``)
        so that the cache is independent from formatting.
    compression
        Optional compression parameter to be passed to the serializer.
    """

    _serializers = {
        "parquet": serializer.ParquetSerializer,
        "joblib": serializer.JoblibSerializer,
    }

    def __init__(
        self,
        cache_store: Union[str, Path],
        backend: str = "parquet",
        normalize: bool = True,
        compression: Any = None,
    ) -> None:
        if backend not in self._serializers:
            raise ValueError(
                f"backend={backend!r} is invalid. Choose one of {sorted(self._serializers)}"
            )
        self.serializer = self._serializers[backend](compression=compression)
        self.cache_store = Path(cache_store).expanduser() / self.serializer.fmt
        self.cache_store.mkdir(parents=True, exist_ok=True)
        self.normalize = normalize

    def _hash(self, instance: str, params: str) -> str:
        return hash_instance(instance, normalize=self.normalize, extra=params)

    def exists(self, instance: str, params: str = "") -> bool:
        """Return True if rows for the instance and parameters exist in cache."""
        return (
            self.get_metadata_filepath(instance, params).exists()
            and self.get_cache_filepath(instance, params).exists()
        )

    def get_metadata_filepath(self, instance: str, params: str = "") -> Path:
        return self.cache_store / (self._hash(instance, params) + ".json")

    def get_cache_filepath(self, instance: str, params: str = "") -> Path:
        return self.cache_store / (self._hash(instance, params) + self.serializer.extension)

    def load_metadata(self, instance: str, params: str = "") -> dict:
        metadata_file = self.get_metadata_filepath(instance, params)
        if not metadata_file.exists():
            raise ValueError("Metadata for the given instance does not exist.")
        return json.loads(metadata_file.read_text())

    def load_results(self, instance: str, params: str = "") -> pd.DataFrame:
        cache_file = self.get_cache_filepath(instance, params)
        if not cache_file.exists():
            raise ValueError("Cached rows for the given instance do not exist.")
        return self.serializer.load(cache_file)

    def load(self, instance: str, params: str = "") -> Tuple[pd.DataFrame, dict]:
        """Load rows and metadata for an instance if they exist in cache."""
        return self.load_results(instance, params), self.load_metadata(instance, params)

    def dump_metadata(self, instance: str, params: str, metadata: dict) -> None:
        metadata["cache_file"] = self.get_cache_filepath(instance, params).name
        metadata["instance"] = normalize_instance(instance) if self.normalize else instance
        metadata["params"] = params
        self.get_metadata_filepath(instance, params).write_text(json.dumps(metadata, indent=True))

    def dump_results(self, instance: str, params: str, results: pd.DataFrame) -> None:
        self.serializer.dump(results, self.get_cache_filepath(instance, params))

    def dump(self, instance: str, params: str, results: pd.DataFrame, metadata: dict) -> None:
        """Dump rows and metadata for an instance to cache."""
        self.dump_results(instance, params, results)
        self.dump_metadata(instance, params, metadata)

    def list(self) -> pd.DataFrame:
        """List cached instances with their metadata."""
        cache_list = [json.loads(f.read_text()) for f in self.cache_store.glob("*.json")]
        if not cache_list:
            return pd.DataFrame(
                columns=["instance", "params", "cache_file", "executed_at", "duration"]
            )
        return pd.DataFrame(cache_list)

    def export(self, filename: Union[str, Path], keys: Optional[Iterable[Key]] = None) -> None:
        """Export contents of cache to a zip file.

        Parameters
        ----------
        filename
            Path to a zip file where cache will be exported.
        keys
            ``(instance, params)`` pairs to export. If None, all cache contents
            are exported.
        """
        if keys is None:
            listing = self.list()
            keys = zip(listing["instance"], listing["params"])
        filename = Path(filename)
        filename = filename.with_suffix(".zip") if filename.suffix == "" else filename
        with ZipFile(filename, "w") as archive:
            for instance, params in keys:
                for path in (
                    self.get_cache_filepath(instance, params),
                    self.get_metadata_filepath(instance, params),
                ):
                    archive.write(str(path), arcname=path.name)

    def import_cache(self, filename: Union[str, Path]) -> None:
        """Import the contents of a zip file written by :py:meth:`export`."""
        with ZipFile(filename, "r") as archive:
            archive.extractall(path=self.cache_store)
