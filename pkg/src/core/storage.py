"""
Storage utilities for KlSpark.

Result envelopes and service run records are persisted as JSON files under
the results directory; trace tables can additionally be written as CSV.
"""

import csv
import os
import logging
from typing import Any, Dict, List, Optional

from src.core.models import ResultEnvelope, RunRecord, RunStatus
from src.core.utils import save_to_json_file, load_from_json_file


class FileStorage:
    """Base class for directory-backed storage."""

    def __init__(self, root: str):
        """
        Initialize file storage.

        Args:
            root: Directory holding the stored files
        """
        self.root = root
        self.logger = logging.getLogger(f"klspark.storage.{self.__class__.__name__}")

    def _path(self, *parts: str) -> str:
        return os.path.join(self.root, *parts)


class ResultStorage(FileStorage):
    """Storage for result envelopes and service runs."""

    def save_result(self, envelope: ResultEnvelope, path: Optional[str] = None) -> Optional[str]:
        """
        Save a result envelope as JSON.

        Args:
            envelope: Envelope to save
            path: Explicit output path; defaults to <root>/<command>-<run_id>.json

        Returns:
            The path written, None on failure
        """
        path = path or self._path(f"{envelope.command}-{envelope.run_id}.json")
        if save_to_json_file(envelope.model_dump(mode="json"), path):
            self.logger.info(f"Saved {envelope.command} result to {path}")
            return path
        return None

    def load_result(self, path: str) -> Optional[ResultEnvelope]:
        """
        Load a result envelope.

        Args:
            path: Path of a JSON result file

        Returns:
            The envelope, None if the file is missing or unreadable
        """
        data = load_from_json_file(path)
        if data is None:
            return None
        try:
            return ResultEnvelope.model_validate(data)
        except Exception as e:
            self.logger.error(f"Error reading result {path}: {e}")
            return None

    def save_rows_csv(self, rows: List[Dict[str, Any]], columns: List[str], path: str) -> bool:
        """
        Write rows to a CSV file with the given column order.

        Args:
            rows: Row dictionaries
            columns: Column names, in order
            path: Output path

        Returns:
            True if successful, False otherwise
        """
        try:
            os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
            with open(path, "w", newline="") as f:
                writer = csv.DictWriter(f, fieldnames=columns, extrasaction="ignore")
                writer.writeheader()
                for row in rows:
                    writer.writerow(row)
            return True
        except Exception as e:
            self.logger.error(f"Error writing CSV {path}: {e}")
            return False

    def save_run(self, run: RunRecord) -> bool:
        """
        Save a service run record.

        Args:
            run: Run to save

        Returns:
            True if successful, False otherwise
        """
        return save_to_json_file(run.model_dump(mode="json"), self._path("runs", f"{run.id}.json"))

    def get_run(self, run_id: str) -> Optional[RunRecord]:
        """
        Get a run record.

        Args:
            run_id: ID of the run

        Returns:
            RunRecord if found, None otherwise
        """
        data = load_from_json_file(self._path("runs", f"{run_id}.json"))
        if data is None:
            return None
        return RunRecord.model_validate(data)

    def get_runs_by_status(self, status: RunStatus) -> List[RunRecord]:
        """
        Get all stored runs with a specific status.

        Args:
            status: Status to filter by

        Returns:
            List of runs with the specified status
        """
        runs_dir = self._path("runs")
        if not os.path.isdir(runs_dir):
            return []
        runs = []
        for name in sorted(os.listdir(runs_dir)):
            if not name.endswith(".json"):
                continue
            run = self.get_run(name[:-5])
            if run is not None and run.status == status:
                runs.append(run)
        return runs
